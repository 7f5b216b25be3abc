// Radial large solutions of Delta_p u = u^2 on the unit disk as p -> 1.

#include <cmath>
#include <cstdio>

#include "largesol/largesol.hpp"

int main() {
  using namespace largesol;
  const RadialProblem prob(2, 1.0, Nonlinearity::power(1.0, 2.0));
  const SweepTable t = p_sweep(prob, {1.5, 1.3, 1.2, 1.1, 1.05});
  std::printf("%6s %14s %14s %14s\n", "p", "mean r<=1/2", "u(0)", "bound at 0");
  for (const auto& r : t.rows) {
    if (!r.error.empty()) {
      std::printf("%6.2f  failed: %s\n", r.p, r.error.c_str());
      continue;
    }
    std::printf("%6.2f %14.6f %14.6f %14.6f\n", r.p, r.interior_mean, r.center_value, r.center_bound);
  }
  std::printf("limit f^{-1}(N/R) = %.6f, global bound %.6f, optimal bound %.6f\n", t.rows.front().limit_ref,
              *t.limit_bound_global, *t.limit_bound_optimal);
  return t.complete() ? 0 : 3;
}
