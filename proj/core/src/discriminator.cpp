#include "lcc/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lcc/error.hpp"

namespace lcc {

DiscriminatorKind parse_discriminator(std::string_view name) {
  if (name == "dist") return DiscriminatorKind::Dist;
  if (name == "1nn") return DiscriminatorKind::OneNN;
  if (name == "1sv") return DiscriminatorKind::OneSV;
  throw DataError("unknown discriminator '" + std::string(name) + "' (expected dist, 1nn, 1sv)");
}

std::string_view discriminator_name(DiscriminatorKind kind) {
  switch (kind) {
    case DiscriminatorKind::Dist: return "dist";
    case DiscriminatorKind::OneNN: return "1nn";
    case DiscriminatorKind::OneSV: return "1sv";
  }
  return "unknown";
}

double svm_1d_objective(std::span<const double> values, std::span<const Label> labels, double lambda, double w,
                        double r) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    hinge += std::max(0.0, 1.0 - sign_of(labels[i]) * (w * values[i] + r));
  }
  return lambda * w * w + hinge / static_cast<double>(values.size());
}

namespace {

struct Breakpoint {
  double at;
  double a;
  double b;
};

// Minimizes lambda w^2 + (1/m) sum_i max(0, a_i + b_i w) exactly.
// Returns {w, value}.
std::pair<double, double> minimize_on_line(std::vector<Breakpoint>& points, double constant, double lambda,
                                           double m) {
  std::sort(points.begin(), points.end(), [](const Breakpoint& x, const Breakpoint& y) { return x.at < y.at; });
  // As w -> -inf the terms with b < 0 are active.
  double slope = 0.0;
  double offset = constant;
  for (const auto& p : points) {
    if (p.b < 0.0) {
      slope += p.b;
      offset += p.a;
    }
  }
  double best_w = 0.0;
  double best_value = kInf;
  auto consider = [&](double lo, double hi) {
    double w = -slope / (2.0 * lambda * m);
    w = std::clamp(w, lo, hi);
    const double value = lambda * w * w + (offset + slope * w) / m;
    if (value < best_value) {
      best_value = value;
      best_w = w;
    }
  };
  double lo = -kInf;
  std::size_t k = 0;
  while (k < points.size()) {
    const double at = points[k].at;
    consider(lo, at);
    for (; k < points.size() && points[k].at == at; ++k) {
      if (points[k].b > 0.0) {
        slope += points[k].b;
        offset += points[k].a;
      } else {
        slope -= points[k].b;
        offset -= points[k].a;
      }
    }
    lo = at;
  }
  consider(lo, kInf);
  return {best_w, best_value};
}

// Midpoint of argmin_r sum_i max(0, 1 - y_i (w v_i + r)); both classes present.
double best_intercept(std::span<const double> values, std::span<const Label> labels, double w) {
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = sign_of(labels[i]);
    (labels[i] == Label::Positive ? pos : neg).push_back(y - w * values[i]);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  const auto count_pos_above = [&](double r) {  // #{pos : r_i > r}
    return static_cast<double>(pos.end() - std::upper_bound(pos.begin(), pos.end(), r));
  };
  const auto count_pos_at_or_above = [&](double r) {
    return static_cast<double>(pos.end() - std::lower_bound(pos.begin(), pos.end(), r));
  };
  const auto count_neg_at_or_below = [&](double r) {
    return static_cast<double>(std::upper_bound(neg.begin(), neg.end(), r) - neg.begin());
  };
  const auto count_neg_below = [&](double r) {
    return static_cast<double>(std::lower_bound(neg.begin(), neg.end(), r) - neg.begin());
  };

  std::vector<double> all(pos);
  all.insert(all.end(), neg.begin(), neg.end());
  std::sort(all.begin(), all.end());

  double r_lo = all.back();
  for (double r : all) {
    if (count_neg_at_or_below(r) - count_pos_above(r) >= 0.0) {
      r_lo = r;
      break;
    }
  }
  double r_hi = all.front();
  for (auto it = all.rbegin(); it != all.rend(); ++it) {
    if (count_neg_below(*it) - count_pos_at_or_above(*it) <= 0.0) {
      r_hi = *it;
      break;
    }
  }
  return 0.5 * (r_lo + r_hi);
}

}  // namespace

Svm1d solve_svm_1d(std::span<const double> values, std::span<const Label> labels, double lambda) {
  if (values.size() != labels.size()) throw DataError("solve_svm_1d: values and labels differ in length");
  if (!(lambda > 0.0)) throw DataError("solve_svm_1d: lambda must be positive");
  const bool has_neg = std::find(labels.begin(), labels.end(), Label::Negative) != labels.end();
  const bool has_pos = std::find(labels.begin(), labels.end(), Label::Positive) != labels.end();
  if (!has_neg || !has_pos) throw DataError("solve_svm_1d: both labels must be present");
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("solve_svm_1d: non-finite value");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  Svm1d out;
  if (*lo_it == *hi_it) {
    const auto n_pos = std::count(labels.begin(), labels.end(), Label::Positive);
    const auto n_neg = static_cast<std::ptrdiff_t>(labels.size()) - n_pos;
    out.w = 0.0;
    out.r = n_pos > n_neg ? 1.0 : (n_neg > n_pos ? -1.0 : 0.0);
    out.objective = svm_1d_objective(values, labels, lambda, out.w, out.r);
    return out;
  }

  const double m = static_cast<double>(values.size());
  double best_w = 0.0;
  double best_value = kInf;
  std::vector<Breakpoint> points;
  points.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    // Kink line of instance k: r = y_k - w v_k.
    const double yk = sign_of(labels[k]);
    double constant = 0.0;
    points.clear();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double yi = sign_of(labels[i]);
      const double a = 1.0 - yi * yk;
      const double b = -yi * (values[i] - values[k]);
      if (b == 0.0) {
        constant += std::max(0.0, a);
      } else {
        points.push_back({-a / b, a, b});
      }
    }
    const auto [w, value] = minimize_on_line(points, constant, lambda, m);
    if (value < best_value) {
      best_value = value;
      best_w = w;
    }
  }
  out.w = best_w;
  out.r = best_intercept(values, labels, best_w);
  out.objective = svm_1d_objective(values, labels, lambda, out.w, out.r);
  return out;
}

Label Discriminator::discriminate(double value) const {
  if (!std::isfinite(value)) throw DataError("discriminate: non-finite value");
  switch (kind) {
    case DiscriminatorKind::Dist:
      return threshold_rule(value, threshold);
    case DiscriminatorKind::OneSV:
      return weight * (scale * value) + intercept >= 0.0 ? Label::Positive : Label::Negative;
    case DiscriminatorKind::OneNN: {
      const auto first = nn_values.begin();
      const auto pos = std::lower_bound(first, nn_values.end(), value);
      // The first entry of a run of equal values carries the lowest index.
      std::size_t best = nn_values.size();
      double best_dist = kInf;
      auto offer = [&](std::size_t k) {
        const double dist = std::abs(nn_values[k] - value);
        if (dist < best_dist || (dist == best_dist && nn_index[k] < nn_index[best])) {
          best_dist = dist;
          best = k;
        }
      };
      if (pos != nn_values.end()) offer(static_cast<std::size_t>(pos - first));
      if (pos != first) {
        const auto run = std::lower_bound(first, pos, *(pos - 1));
        offer(static_cast<std::size_t>(run - first));
      }
      return nn_labels[best];
    }
  }
  return Label::Positive;
}

double Discriminator::score(double value) const {
  switch (kind) {
    case DiscriminatorKind::Dist:
      return value - threshold;
    case DiscriminatorKind::OneSV:
      return weight * (scale * value) + intercept;
    case DiscriminatorKind::OneNN: {
      double nearest[2] = {kInf, kInf};  // [negative, positive]
      for (std::size_t k = 0; k < nn_values.size(); ++k) {
        auto& slot = nearest[nn_labels[k] == Label::Positive ? 1 : 0];
        slot = std::min(slot, std::abs(nn_values[k] - value));
      }
      return nearest[0] - nearest[1];
    }
  }
  return 0.0;
}

Discriminator fit_discriminator(DiscriminatorKind kind, std::span<const double> projected,
                                std::span<const Label> labels, double c_neg_hat, double c_pos_hat, double h) {
  if (projected.empty()) throw DataError("fit_discriminator: no training values");
  if (projected.size() != labels.size()) throw DataError("fit_discriminator: values and labels differ in length");
  for (double v : projected)
    if (!std::isfinite(v)) throw DataError("fit_discriminator: non-finite projected value");

  Discriminator d;
  d.kind = kind;
  d.threshold = (c_neg_hat + c_pos_hat) / 2.0;
  switch (kind) {
    case DiscriminatorKind::Dist:
      break;
    case DiscriminatorKind::OneNN: {
      std::vector<std::size_t> order(projected.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return projected[a] < projected[b]; });
      for (std::size_t k : order) {
        d.nn_values.push_back(projected[k]);
        d.nn_labels.push_back(labels[k]);
        d.nn_index.push_back(k);
      }
      break;
    }
    case DiscriminatorKind::OneSV: {
      if (!(c_pos_hat > c_neg_hat)) {
        throw DataError("fit_discriminator: 1sv needs c_pos_hat > c_neg_hat to scale projected values");
      }
      if (!(h > 0.0)) throw DataError("fit_discriminator: h must be positive");
      d.h = h;
      d.scale = h / (c_pos_hat - c_neg_hat);
      std::vector<double> scaled(projected.begin(), projected.end());
      for (double& v : scaled) v *= d.scale;
      const Svm1d svm = solve_svm_1d(scaled, labels, 1.0);
      d.weight = svm.w;
      d.intercept = svm.r;
      break;
    }
  }
  return d;
}

Discriminator fit_discriminator(DiscriminatorKind kind, const LccModel& model, const Dataset& train, double h) {
  const Eigen::VectorXd projected = model.transform_rows(train.features);
  return fit_discriminator(kind, std::span<const double>(projected.data(), static_cast<std::size_t>(projected.size())),
                           train.labels, model.c_neg_hat, model.c_pos_hat, h);
}

}  // namespace lcc
