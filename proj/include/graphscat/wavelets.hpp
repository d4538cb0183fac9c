#pragma once

#include <memory>
#include <vector>

#include "graphscat/diffusion.hpp"
#include "graphscat/types.hpp"

namespace graphscat {

enum class FrameKind { Tight, Poly };

// t^(2^k) by repeated squaring.
double dyadic_power(double t, int k);

// Dyadic filters on [0,1]:
//   p_0 = 1 - t,  p_j = t^(2^(j-1)) - t^(2^j) for 1 <= j <= J,  p_{J+1} = t^(2^J),
// and q_j = sqrt(p_j). Index J+1 is the low-pass.
class FilterBank {
 public:
  FilterBank(int J, FrameKind kind);

  int J() const { return J_; }
  FrameKind kind() const { return kind_; }
  int count() const { return J_ + 2; }

  double poly(int j, double t) const;
  // p_j for Poly, q_j for Tight.
  double operator()(int j, double t) const;
  // Sum over j of f_j(t)^2, the frame response at eigenvalue t.
  double energy(double t) const;
  // Phi = K^e with e = 2^(J-1) (tight, 1/2 when J = 0) or 2^J (poly).
  double lowpass_exponent() const;

 private:
  int J_;
  FrameKind kind_;
};

// Monomial coefficients of p_j, lowest degree first.
std::vector<double> poly_filter_coefficients(int j, int J);
// sum_k c_k K^k via Horner.
Matrix horner(const Matrix& k, const std::vector<double>& coeffs);

struct WaveletFrame {
  FilterBank bank;
  std::shared_ptr<const DiffusionSystem> sys;
  std::vector<Matrix> psi;  // Psi_0 .. Psi_J
  Matrix phi;

  Index size() const { return phi.rows(); }
  int J() const { return bank.J(); }
  const WeightMatrix& M() const { return sys->M; }
  // Psi_0..Psi_J then Phi.
  const Matrix& filter(int j) const { return j <= bank.J() ? psi[static_cast<std::size_t>(j)] : phi; }
};

WaveletFrame build_frame(std::shared_ptr<const DiffusionSystem> sys, int J, FrameKind kind);
WaveletFrame build_frame(const DiffusionSystem& sys, int J, FrameKind kind);

// [Psi_0 x, ..., Psi_J x, Phi x].
std::vector<Vector> apply_frame(const WaveletFrame& frame, const Vector& x);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Extremes of the frame response over the spectrum of K.
FrameBounds frame_bounds(const WaveletFrame& frame);

// C_J = min over [0,1] of (1-t)^2 + t^(2^(J+1)).
double lower_bound_constant(int J);

}  // namespace graphscat
