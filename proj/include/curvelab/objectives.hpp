#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace curvelab {

using Vector = std::vector<double>;

/// Diagonal quadratic f(y) = 1/2 sum_i lambda_i y_i^2 written in its eigenbasis.
/// `initial_coords` is the starting point y_0 in the same basis.
struct QuadraticSpec {
  std::vector<double> eigenvalues;
  std::vector<double> initial_coords;

  double smoothness() const;  // max_i lambda_i
};

/// f(x) = L/2 x^2 in one dimension.
struct ScaledQuadratic1D {
  double L = 1.0;
};

/// f(x) = log cosh x. Its second derivative lies in (0, 1].
struct LogCosh1D {};

/// One-dimensional convex function whose gradient is continuous and
/// piecewise linear. Slope `slopes[j]` applies on (b_j, b_{j+1}) with
/// b_0 = -inf and b_{k+1} = +inf; g(0) = gradient_at_zero_offset and f(0) = 0.
struct PiecewiseQuadratic1D {
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  double gradient_at_zero_offset = 0.0;
};

/// Sublevel-set Hessian majorization  Hess f(x) <= kappa * A  with
/// majorant_eigmax = lambda_max(A).
struct HessianBound {
  double kappa = 1.0;
  double majorant_eigmax = 0.0;

  double effective_smoothness() const { return kappa * majorant_eigmax; }
};

using ObjectiveDescription =
    std::variant<QuadraticSpec, ScaledQuadratic1D, LogCosh1D, PiecewiseQuadratic1D>;

namespace detail {
class Model;
}

/// Immutable handle to a differentiable convex objective. Copies share the
/// underlying model; all queries are const and thread-safe.
class Objective {
 public:
  std::size_t dimension() const;
  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;

  /// Declared Lipschitz constant of the gradient, if known.
  std::optional<double> smoothness() const;
  std::optional<HessianBound> hessian_bound() const;

  const ObjectiveDescription& description() const { return description_; }
  std::string_view kind() const;

  // Use the make_* factories; they validate the description first.
  Objective(ObjectiveDescription description, std::shared_ptr<const detail::Model> model);

 private:
  ObjectiveDescription description_;
  std::shared_ptr<const detail::Model> model_;
};

Objective make_quadratic(const QuadraticSpec& spec);
Objective make_scaled_quadratic_1d(double L);
Objective make_logcosh_1d();
Objective make_piecewise_quadratic_1d(const PiecewiseQuadratic1D& spec);
Objective make_objective(const ObjectiveDescription& description);

void validate(const QuadraticSpec& spec);
void validate(const PiecewiseQuadratic1D& spec);
void validate(const HessianBound& bound);

/// Outcome of cross-checking an objective's declared properties on random pairs.
struct DeclarationAudit {
  std::size_t pairs = 0;
  std::size_t convexity_failures = 0;
  std::size_t lipschitz_failures = 0;
  double worst_convexity_gap = 0.0;   // min over pairs of f(y) - f(x) - g(x).(y-x)
  double worst_lipschitz_ratio = 0.0; // max over pairs of |g(x)-g(y)| / |x-y|

  bool passed() const { return convexity_failures == 0 && lipschitz_failures == 0; }
};

/// Samples pairs uniformly in the box [-radius, radius]^d and checks the
/// first-order convexity inequality and the declared Lipschitz bound, each
/// with absolute slack `tolerance`.
DeclarationAudit audit_declarations(const Objective& objective, std::uint64_t seed,
                                    std::size_t pairs, double radius,
                                    double tolerance = 1e-9);

}  // namespace curvelab
