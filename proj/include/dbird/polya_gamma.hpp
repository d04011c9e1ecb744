#pragma once

#include "dbird/random.hpp"

namespace dbird {

/// A PG(1, c) draw together with the number of proposals it consumed.
struct PgSample {
  double value = 0.0;
  int proposals = 0;
};

/// Exact draw from PG(1, c) by Devroye-style alternating-series
/// accept-reject (truncation point 0.64 on the J*(1, c/2) scale).
/// Throws NonfiniteTilt if c is not finite.
double draw_pg1(double c, Rng& rng);

PgSample draw_pg1_traced(double c, Rng& rng);

/// First moment of PG(b, c): b/(2c) tanh(c/2), equal to b/4 at c = 0.
double pg_mean(double b, double c);

}  // namespace dbird
