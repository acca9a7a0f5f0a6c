// Walks one degeneration: two flat tori joined along a shrinking slit.  As
// the slit closes, the shortest homology basis picks up a short cycle, the
// inverse-square energy blows up like 1/t^2, and the exhaustion built from
// it diverges, while the complex Hessian of the exhaustion keeps at most
// genus many nonpositive directions after the scaling zero is removed.

#include <iostream>

#include "flatstrata/functionals.hpp"
#include "flatstrata/hessian.hpp"
#include "flatstrata/io.hpp"
#include "flatstrata/strata.hpp"

using namespace flatstrata;

int main() {
  const Config cfg;

  std::cout << "slit length   area   energy      exh_m\n";
  for (double t : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    Surface S(builtins::slit_tori_desc(t), cfg);
    std::cout << format12(t) << "  " << format12(S.area()) << "  "
              << format12(inv_square_basis_energy(S, cfg).sum) << "  "
              << format12(exh_m(S, cfg)) << "\n";
  }

  Surface S(builtins::slit_tori_desc(0.15), cfg);
  std::cout << "\nstratum " << S.signature().to_string() << ", period rank "
            << PeriodChart(S, cfg).rank() << "\n";

  const auto res = complex_hessian(
      S, [&](const Surface& T) { return exh_m(T, cfg); }, cfg);
  std::cout << "exh_m Hessian signature " << res.signature() << ", "
            << projective_nonpositive(res)
            << " nonpositive directions after projectivization (genus "
            << S.genus() << ")\n";

  const auto bounds = cohdim_bounds(S.genus(), 0);
  std::cout << "cohomological dimension bound for the moduli space: "
            << bounds.moduli << "\n";
  return 0;
}
