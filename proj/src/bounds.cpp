#include "epistream/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epistream/event.hpp"

namespace epistream {

double separation_requirement(int m, int v) {
  const double md = m;
  return std::max(1.0, (1.0 - v / md) * (md - v + 1.0));
}

std::optional<CorollaryCase> corollary_case_for(int m, int v) {
  if (m < 2) return std::nullopt;
  if (v == 1) return CorollaryCase::SingleBatch;
  if (v == m) return CorollaryCase::EveryBatch;
  if (v == (m + 1) / 2) return CorollaryCase::Midpoint;
  return std::nullopt;
}

int corollary_v(CorollaryCase c, int m) {
  switch (c) {
    case CorollaryCase::SingleBatch: return 1;
    case CorollaryCase::EveryBatch: return m;
    case CorollaryCase::Midpoint: return (m + 1) / 2;
  }
  return 1;
}

Rational corollary_condition(CorollaryCase c, std::int64_t m) {
  switch (c) {
    case CorollaryCase::SingleBatch: return Rational(m - 1);
    case CorollaryCase::EveryBatch: return Rational(1);
    case CorollaryCase::Midpoint: return Rational((m / 2) * ((m + 2) / 2), m);  // ceil((m-1)/2) ceil((m+1)/2) / m
  }
  return Rational(0);
}

Rational corollary_mu_floor(CorollaryCase c, std::int64_t m) {
  switch (c) {
    case CorollaryCase::SingleBatch: return Rational(m - 1);
    case CorollaryCase::EveryBatch: return Rational(1);
    case CorollaryCase::Midpoint: return Rational(m * m - 1, 4 * m);
  }
  return Rational(1);
}

Rational corollary_error_bound(CorollaryCase c, std::int64_t k, std::int64_t m, Rational epsilon) {
  if (m < 2) throw ConfigError("closed-form error bounds need m >= 2");
  return epsilon * Rational(k * m) / corollary_mu_floor(c, m);
}

BoundsResult bounds(const BoundsInput& in) {
  if (in.m < 1 || in.v < 1 || in.v > in.m) throw ConfigError("bounds need 1 <= v <= m");
  if (in.fk_per_batch.size() != static_cast<std::size_t>(in.m)) throw ConfigError("need one f_k value per batch");
  if (in.delta < 0.0 || in.phi < 0.0 || in.epsilon < 0.0 || in.k < 0) throw ConfigError("bounds parameters must be non-negative");

  const double m = in.m;
  const double v = in.v;
  const double fk_sum = std::accumulate(in.fk_per_batch.begin(), in.fk_per_batch.end(), 0.0);

  BoundsResult out;
  out.f_lower = fk_sum - (m - v) * (m - v + 1.0) * in.delta;
  out.f_upper = fk_sum + v * (v + 1.0) * in.delta;
  out.valid = in.phi / 2.0 > separation_requirement(in.m, in.v);
  out.mu = std::min({m - v + 1.0, in.phi / 2.0, 0.5 * (std::sqrt(1.0 + 2.0 * m * in.phi) - 1.0)});
  out.max_errors = out.mu > 0.0 ? in.epsilon * static_cast<double>(in.k) * m / out.mu : 0.0;

  out.corollary = corollary_case_for(in.m, in.v);
  if (out.corollary && out.valid) {
    const Rational cond = corollary_condition(*out.corollary, in.m);
    if (in.phi / 2.0 > boost::rational_cast<double>(cond))
      out.corollary_errors = in.epsilon * static_cast<double>(in.k) * m /
                             boost::rational_cast<double>(corollary_mu_floor(*out.corollary, in.m));
  }
  return out;
}

}  // namespace epistream
