#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string_view>

#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/vector_ops.hpp"

namespace apcg {

/// Scalar loss family phi_i with conjugate phi_i^*.
///
/// minimize_conj_quadratic(i, a, b) returns argmin_s { a/2 s^2 + b s + phi_i^*(-s) },
/// which every prox and coordinate step on the dual reduces to; it needs
/// a + gamma > 0. conj_neg_subgradient(i, x, m) returns an element of
/// d phi_i^*(-x), the one closest to m when the set is not a singleton.
template <class L>
concept ErmLoss = requires(const L& l, std::size_t i, double a) {
  { l.gamma() } -> std::convertible_to<double>;
  { l.value(i, a) } -> std::convertible_to<double>;
  { l.conj(i, a) } -> std::convertible_to<double>;
  { l.minimize_conj_quadratic(i, a, a) } -> std::convertible_to<double>;
  { l.conj_neg_subgradient(i, a, a) } -> std::convertible_to<double>;
  { l.in_dual_domain(i, a) } -> std::convertible_to<bool>;
  { l.project_dual(i, a) } -> std::convertible_to<double>;
  { L::name } -> std::convertible_to<std::string_view>;
  { L::strongly_convex } -> std::convertible_to<bool>;
};

/// phi(a) = 0 for a >= 1, 1 - a - gamma/2 for a <= 1 - gamma, (1 - a)^2 / (2 gamma)
/// in between. Labels are assumed folded into the examples.
/// phi^*(b) = b + gamma/2 b^2 on [-1, 0], +inf elsewhere.
class SmoothedHingeLoss {
 public:
  static constexpr std::string_view name = "smoothed_hinge";
  static constexpr bool strongly_convex = false;

  explicit SmoothedHingeLoss(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw input_error("SmoothedHingeLoss: gamma must be positive");
  }

  double gamma() const noexcept { return gamma_; }

  double value(std::size_t, double a) const {
    if (a >= 1.0) return 0.0;
    if (a <= 1.0 - gamma_) return 1.0 - a - 0.5 * gamma_;
    return (1.0 - a) * (1.0 - a) / (2.0 * gamma_);
  }

  double derivative(std::size_t, double a) const {
    if (a >= 1.0) return 0.0;
    if (a <= 1.0 - gamma_) return -1.0;
    return (a - 1.0) / gamma_;
  }

  double conj(std::size_t, double b) const {
    if (b < -1.0 || b > 0.0) return infinity;
    return b + 0.5 * gamma_ * b * b;
  }

  bool in_dual_domain(std::size_t, double x) const { return x >= 0.0 && x <= 1.0; }
  double project_dual(std::size_t, double x) const { return std::clamp(x, 0.0, 1.0); }

  // a/2 s^2 + b s - s + gamma/2 s^2 over s in [0, 1]
  double minimize_conj_quadratic(std::size_t, double a, double b) const {
    return std::clamp((1.0 - b) / (a + gamma_), 0.0, 1.0);
  }

  double conj_neg_subgradient(std::size_t i, double x, double m) const {
    if (!in_dual_domain(i, x)) throw input_error("smoothed hinge: dual variable outside [0, 1]");
    if (x == 0.0) return std::max(1.0, m);
    if (x == 1.0) return std::min(1.0 - gamma_, m);
    return 1.0 - gamma_ * x;
  }

 private:
  double gamma_;
};

/// phi_i(a) = (a - b_i)^2 / (2 gamma); phi_i^*(u) = b_i u + gamma/2 u^2.
/// 1/gamma-smooth and 1/gamma-strongly convex, so eta = gamma.
class SquareLoss {
 public:
  static constexpr std::string_view name = "square";
  static constexpr bool strongly_convex = true;

  SquareLoss(double gamma, Vector targets) : gamma_(gamma), targets_(std::move(targets)) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw input_error("SquareLoss: gamma must be positive");
    if (!all_finite(targets_)) throw input_error("SquareLoss: targets must be finite");
  }

  double gamma() const noexcept { return gamma_; }
  double eta() const noexcept { return gamma_; }
  const Vector& targets() const noexcept { return targets_; }

  double value(std::size_t i, double a) const {
    const double r = a - targets_[i];
    return r * r / (2.0 * gamma_);
  }

  double derivative(std::size_t i, double a) const { return (a - targets_[i]) / gamma_; }

  double conj(std::size_t i, double u) const { return targets_[i] * u + 0.5 * gamma_ * u * u; }

  bool in_dual_domain(std::size_t, double x) const { return std::isfinite(x); }
  double project_dual(std::size_t, double x) const { return x; }

  // a/2 s^2 + b s - b_i s + gamma/2 s^2
  double minimize_conj_quadratic(std::size_t i, double a, double b) const {
    return (targets_[i] - b) / (a + gamma_);
  }

  double conj_neg_subgradient(std::size_t i, double x, double) const {
    if (!std::isfinite(x)) throw input_error("square loss: non-finite dual variable");
    return targets_[i] - gamma_ * x;
  }

 private:
  double gamma_;
  Vector targets_;
};

}  // namespace apcg
