#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "epistream/event.hpp"  // ConfigError

namespace epistream {

using Rational = boost::rational<std::int64_t>;

enum class CorollaryCase { SingleBatch, EveryBatch, Midpoint };  // v = 1, v = m, v = floor((m+1)/2)

struct BoundsInput {
  std::int64_t k = 1;
  int m = 1;
  int v = 1;
  double delta = 0.0;
  double phi = 0.0;
  double epsilon = 0.0;
  std::vector<double> fk_per_batch;  // one entry per batch of the window
};

struct BoundsResult {
  double f_lower = 0.0;  // window frequency floor of every (v,k)-persistent episode
  double f_upper = 0.0;  // window frequency ceiling of every non-persistent episode
  bool valid = false;    // separation condition phi/2 > max{1, (1 - v/m)(m - v + 1)}
  double mu = 0.0;
  double max_errors = 0.0;
  std::optional<CorollaryCase> corollary;
  std::optional<double> corollary_errors;
};

BoundsResult bounds(const BoundsInput& in);

// Smallest phi/2 for which the approximation guarantee holds.
double separation_requirement(int m, int v);

std::optional<CorollaryCase> corollary_case_for(int m, int v);
int corollary_v(CorollaryCase c, int m);

// phi/2 must exceed this for the closed-form error count to apply.
Rational corollary_condition(CorollaryCase c, std::int64_t m);
// Lower bound on mu under the corollary condition.
Rational corollary_mu_floor(CorollaryCase c, std::int64_t m);
// epsilon * k * m / corollary_mu_floor.
Rational corollary_error_bound(CorollaryCase c, std::int64_t k, std::int64_t m, Rational epsilon);

}  // namespace epistream
