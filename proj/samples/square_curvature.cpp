// Curvature field and large solution on the unit square.
//
//   square_curvature [h] [lambda_max]

#include <cstdio>
#include <cstdlib>

#include "largesol/largesol.hpp"

int main(int argc, char** argv) {
  using namespace largesol;
  const double h = argc > 1 ? std::atof(argv[1]) : 1.0 / 256.0;
  const double lambda_max = argc > 2 ? std::atof(argv[2]) : 40.0;
  try {
    const Domain sq = square(1.0, {0.0, 0.0});
    const CheegerResult k = cheeger(sq);
    std::printf("Cheeger constant   %.9f\n", k.lambda_K);

    const CurvatureField v = tv_large_solution(sq, lambda_max, h);
    const MassReport m = mass_identities(v, sq);
    std::printf("coverage           %.6f\n", v.coverage);
    std::printf("integral of |H|    %.6f  (perimeter %.6f)\n", m.total, m.perimeter);
    std::printf("v at centre        %.6f\n", v.value_at({0.5, 0.5}));
    std::printf("v near a corner    %.6f\n", v.value_at({0.02, 0.02}));

    const ScalarField u = large_solution(v, Nonlinearity::power(1.0, 2.0));
    std::printf("u = sqrt(v) centre %.6f\n", u.value_at({0.5, 0.5}));
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  }
  return 0;
}
