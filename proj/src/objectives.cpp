#include "curvelab/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "curvelab/error.hpp"

namespace curvelab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kInvalidSchedule: return "invalid-schedule";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kOutOfRegime: return "out-of-regime";
    case ErrorCode::kOutOfInterval: return "out-of-interval";
    case ErrorCode::kDegenerateStart: return "degenerate-start";
    case ErrorCode::kInapplicable: return "inapplicable";
    case ErrorCode::kUnboundedStepsize: return "unbounded-stepsize";
    case ErrorCode::kInconsistentWitness: return "inconsistent-witness";
    case ErrorCode::kInvalidConfig: return "invalid-config";
  }
  return "unknown";
}

namespace detail {

class Model {
 public:
  virtual ~Model() = default;
  virtual std::size_t dimension() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  virtual std::optional<double> smoothness() const = 0;
  virtual std::optional<HessianBound> hessian_bound() const { return std::nullopt; }
};

namespace {

class DiagonalQuadratic final : public Model {
 public:
  explicit DiagonalQuadratic(std::vector<double> eigenvalues)
      : eigenvalues_(std::move(eigenvalues)),
        top_(*std::max_element(eigenvalues_.begin(), eigenvalues_.end())) {}

  std::size_t dimension() const override { return eigenvalues_.size(); }

  double value(std::span<const double> x) const override {
    double sum = 0.0;
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
      sum += 0.5 * eigenvalues_[i] * x[i] * x[i];
    }
    return sum;
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) out[i] = eigenvalues_[i] * x[i];
  }

  std::optional<double> smoothness() const override { return top_; }

 private:
  std::vector<double> eigenvalues_;
  double top_;
};

class LogCosh final : public Model {
 public:
  std::size_t dimension() const override { return 1; }

  double value(std::span<const double> x) const override {
    // log cosh x = |x| + log1p(exp(-2|x|)) - log 2, stable for large |x|.
    const double a = std::abs(x[0]);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    out[0] = std::tanh(x[0]);
  }

  std::optional<double> smoothness() const override { return 1.0; }
  std::optional<HessianBound> hessian_bound() const override {
    return HessianBound{.kappa = 1.0, .majorant_eigmax = 1.0};
  }
};

// Gradient G and value F are tabulated at every knot (breakpoints plus the
// anchor 0) by exact integration outward from the anchor; a query expands
// around the knot that bounds its segment.
class PiecewiseQuadratic final : public Model {
 public:
  explicit PiecewiseQuadratic(const PiecewiseQuadratic1D& spec)
      : breakpoints_(spec.breakpoints), slopes_(spec.slopes), g0_(spec.gradient_at_zero_offset) {
    top_ = *std::max_element(slopes_.begin(), slopes_.end());

    knots_ = breakpoints_;
    if (!std::binary_search(knots_.begin(), knots_.end(), 0.0)) {
      knots_.insert(std::upper_bound(knots_.begin(), knots_.end(), 0.0), 0.0);
    }
    grad_.assign(knots_.size(), 0.0);
    val_.assign(knots_.size(), 0.0);
    const auto anchor = static_cast<std::size_t>(
        std::lower_bound(knots_.begin(), knots_.end(), 0.0) - knots_.begin());

    for (std::size_t j = anchor + 1; j < knots_.size(); ++j) {
      const double h = knots_[j] - knots_[j - 1];
      const double m = slope_on(knots_[j - 1], knots_[j]);
      grad_[j] = grad_[j - 1] + m * h;
      val_[j] = val_[j - 1] + (g0_ + grad_[j - 1]) * h + 0.5 * m * h * h;
    }
    for (std::size_t j = anchor; j-- > 0;) {
      const double h = knots_[j] - knots_[j + 1];  // negative
      const double m = slope_on(knots_[j], knots_[j + 1]);
      grad_[j] = grad_[j + 1] + m * h;
      val_[j] = val_[j + 1] + (g0_ + grad_[j + 1]) * h + 0.5 * m * h * h;
    }
  }

  std::size_t dimension() const override { return 1; }

  double value(std::span<const double> x) const override {
    const Local loc = locate(x[0]);
    return val_[loc.knot] + (g0_ + grad_[loc.knot]) * loc.offset +
           0.5 * loc.slope * loc.offset * loc.offset;
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    const Local loc = locate(x[0]);
    out[0] = g0_ + grad_[loc.knot] + loc.slope * loc.offset;
  }

  std::optional<double> smoothness() const override { return top_; }

 private:
  struct Local {
    std::size_t knot;
    double offset;
    double slope;
  };

  // Slope of the original spec on the open interval (lo, hi), which never
  // straddles a breakpoint.
  double slope_on(double lo, double hi) const {
    const double mid = lo + 0.5 * (hi - lo);
    const auto j = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), mid) -
                   breakpoints_.begin();
    return slopes_[static_cast<std::size_t>(j)];
  }

  Local locate(double x) const {
    const auto upper = std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin();
    if (upper == 0) {
      const double slope = slopes_.front();
      return {0, x - knots_.front(), slope};
    }
    const auto knot = static_cast<std::size_t>(upper - 1);
    const double hi = knot + 1 < knots_.size() ? knots_[knot + 1]
                                               : knots_[knot] + 1.0;
    return {knot, x - knots_[knot], slope_on(knots_[knot], hi)};
  }

  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  double g0_;
  double top_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> grad_;  // G(knot) = integral of the slope from 0
  std::vector<double> val_;   // f(knot)
};

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace
}  // namespace detail

double QuadraticSpec::smoothness() const {
  return eigenvalues.empty() ? 0.0 : *std::max_element(eigenvalues.begin(), eigenvalues.end());
}

void validate(const QuadraticSpec& spec) {
  if (spec.eigenvalues.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "quadratic: eigenvalues must be nonempty");
  }
  if (spec.initial_coords.size() != spec.eigenvalues.size()) {
    throw Error(ErrorCode::kInvalidSpec,
                fmt::format("quadratic: {} eigenvalues but {} initial coordinates",
                            spec.eigenvalues.size(), spec.initial_coords.size()));
  }
  if (!detail::all_finite(spec.eigenvalues) || !detail::all_finite(spec.initial_coords)) {
    throw Error(ErrorCode::kInvalidSpec, "quadratic: nonfinite entry");
  }
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.eigenvalues[i] < 0.0) {
      throw Error(ErrorCode::kInvalidSpec,
                  fmt::format("quadratic: eigenvalue {} is negative ({})", i, spec.eigenvalues[i]));
    }
  }
}

void validate(const PiecewiseQuadratic1D& spec) {
  const auto& b = spec.breakpoints;
  const auto& m = spec.slopes;
  if (m.size() != b.size() + 1) {
    throw Error(ErrorCode::kInvalidSpec,
                fmt::format("piecewise1d: {} breakpoints need {} slopes, got {}", b.size(),
                            b.size() + 1, m.size()));
  }
  if (!detail::all_finite(b) || !detail::all_finite(m) ||
      !std::isfinite(spec.gradient_at_zero_offset)) {
    throw Error(ErrorCode::kInvalidSpec, "piecewise1d: nonfinite entry");
  }
  for (std::size_t j = 1; j < b.size(); ++j) {
    if (!(b[j - 1] < b[j])) {
      throw Error(ErrorCode::kInvalidSpec,
                  fmt::format("piecewise1d: breakpoints not strictly increasing at {}", j));
    }
  }
  if (m.front() < 0.0) {
    throw Error(ErrorCode::kInvalidSpec, "piecewise1d: slopes must be nonnegative");
  }
  for (std::size_t j = 1; j < m.size(); ++j) {
    if (m[j] < m[j - 1]) {
      throw Error(ErrorCode::kInvalidSpec,
                  fmt::format("piecewise1d: slopes decrease at {} ({} < {})", j, m[j], m[j - 1]));
    }
  }
}

void validate(const HessianBound& bound) {
  if (!(bound.kappa > 0.0) || !std::isfinite(bound.kappa)) {
    throw Error(ErrorCode::kInvalidSpec, "hessian bound: kappa must be positive");
  }
  if (!(bound.majorant_eigmax >= 0.0) || !std::isfinite(bound.majorant_eigmax)) {
    throw Error(ErrorCode::kInvalidSpec, "hessian bound: majorant eigmax must be nonnegative");
  }
}

Objective::Objective(ObjectiveDescription description, std::shared_ptr<const detail::Model> model)
    : description_(std::move(description)), model_(std::move(model)) {}

std::size_t Objective::dimension() const { return model_->dimension(); }

double Objective::value(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("point has dimension {}, objective {}", x.size(), dimension()));
  }
  return model_->value(x);
}

Vector Objective::gradient(std::span<const double> x) const {
  Vector out(dimension());
  gradient(x, out);
  return out;
}

void Objective::gradient(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dimension() || out.size() != dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("point has dimension {}, objective {}", x.size(), dimension()));
  }
  model_->gradient(x, out);
}

std::optional<double> Objective::smoothness() const { return model_->smoothness(); }

std::optional<HessianBound> Objective::hessian_bound() const { return model_->hessian_bound(); }

std::string_view Objective::kind() const {
  struct Visitor {
    std::string_view operator()(const QuadraticSpec&) const { return "quadratic"; }
    std::string_view operator()(const ScaledQuadratic1D&) const { return "scaled1d"; }
    std::string_view operator()(const LogCosh1D&) const { return "logcosh"; }
    std::string_view operator()(const PiecewiseQuadratic1D&) const { return "piecewise1d"; }
  };
  return std::visit(Visitor{}, description_);
}

Objective make_quadratic(const QuadraticSpec& spec) {
  validate(spec);
  return Objective(spec, std::make_shared<detail::DiagonalQuadratic>(spec.eigenvalues));
}

Objective make_scaled_quadratic_1d(double L) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorCode::kInvalidSpec, fmt::format("scaled1d: L must be positive, got {}", L));
  }
  return Objective(ScaledQuadratic1D{L},
                   std::make_shared<detail::DiagonalQuadratic>(std::vector<double>{L}));
}

Objective make_logcosh_1d() {
  return Objective(LogCosh1D{}, std::make_shared<detail::LogCosh>());
}

Objective make_piecewise_quadratic_1d(const PiecewiseQuadratic1D& spec) {
  validate(spec);
  return Objective(spec, std::make_shared<detail::PiecewiseQuadratic>(spec));
}

Objective make_objective(const ObjectiveDescription& description) {
  struct Visitor {
    Objective operator()(const QuadraticSpec& s) const { return make_quadratic(s); }
    Objective operator()(const ScaledQuadratic1D& s) const { return make_scaled_quadratic_1d(s.L); }
    Objective operator()(const LogCosh1D&) const { return make_logcosh_1d(); }
    Objective operator()(const PiecewiseQuadratic1D& s) const {
      return make_piecewise_quadratic_1d(s);
    }
  };
  return std::visit(Visitor{}, description);
}

DeclarationAudit audit_declarations(const Objective& objective, std::uint64_t seed,
                                    std::size_t pairs, double radius, double tolerance) {
  const std::size_t d = objective.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-radius, radius);
  const auto L = objective.smoothness();

  DeclarationAudit audit;
  audit.pairs = pairs;
  audit.worst_convexity_gap = std::numeric_limits<double>::infinity();
  Vector x(d), y(d), gx(d), gy(d);
  for (std::size_t p = 0; p < pairs; ++p) {
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = coord(rng);
      y[i] = coord(rng);
    }
    objective.gradient(x, gx);
    objective.gradient(y, gy);
    double linear = 0.0, dist2 = 0.0, gdist2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      linear += gx[i] * (y[i] - x[i]);
      dist2 += (x[i] - y[i]) * (x[i] - y[i]);
      gdist2 += (gx[i] - gy[i]) * (gx[i] - gy[i]);
    }
    const double gap = objective.value(y) - objective.value(x) - linear;
    audit.worst_convexity_gap = std::min(audit.worst_convexity_gap, gap);
    if (gap < -tolerance) ++audit.convexity_failures;

    if (dist2 > 0.0) {
      const double dist = std::sqrt(dist2);
      const double gdist = std::sqrt(gdist2);
      audit.worst_lipschitz_ratio = std::max(audit.worst_lipschitz_ratio, gdist / dist);
      if (L && gdist > (*L + tolerance) * dist) ++audit.lipschitz_failures;
    }
  }
  return audit;
}

}  // namespace curvelab
