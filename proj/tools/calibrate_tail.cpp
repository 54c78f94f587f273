// Calibrates the tail certificate constant k_scale: for each case the exact
// remainder |sum_{k>l} H(z,k) e^{-phi(k) t}| is compared with tail_bound at
// k_scale = 1, and the largest ratio times a safety factor is suggested.
//
// usage: calibrate_tail [safety=2] > table.csv

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "expfun/bgamma.hpp"
#include "expfun/series.hpp"

using namespace expfun;

int main(int argc, char** argv) {
  const double safety = argc > 1 ? std::atof(argv[1]) : 2.0;
  TailConstants unit;
  unit.k_scale = 1.0;

  struct Case {
    const char* name;
    BernsteinSpec spec;
  };
  const std::vector<Case> cases = {{"linear", BernsteinSpec::linear(1.0)},
                                   {"log1p", BernsteinSpec::log1p()}};
  const std::vector<cdouble> zs = {-0.9, -0.5, cdouble(-0.5, 1.0), 0.5, 1.5, cdouble(2.5, 1.0), -1.0};
  const std::vector<double> ts = {0.5, 1.0, 2.0};
  constexpr int kL = 200;

  double worst = 0.0;
  std::printf("family,z_re,z_im,t,l,remainder,bound_unit,ratio\n");
  for (const auto& c : cases) {
    for (cdouble z : zs) {
      const cdouble lead = mellin_infinity(c.spec, z);
      std::vector<cdouble> h(kL + 1);
      for (int k = 1; k <= kL; ++k) h[static_cast<std::size_t>(k)] = h_term(c.spec, z, k);
      for (double t : ts) {
        const cdouble total = c.spec.family() == Family::linear
                                  ? std::pow(cdouble(1.0 - std::exp(-t)), z)
                                  : moment(c.spec, z, t, 1e-8).value;
        cdouble partial = lead;
        for (int l = 1; l <= kL; ++l) {
          partial += h[static_cast<std::size_t>(l)] * std::exp(-eval(c.spec, double(l)) * t);
          if (l % 10 != 0) continue;
          const double rem = std::abs(total - partial);
          const double bound = tail_bound(c.spec, z, l, t, unit);
          const double ratio = rem / bound;
          // Remainders below the reference accuracy carry no information.
          if (rem > 1e-7 * std::max(1.0, std::abs(total))) worst = std::max(worst, ratio);
          std::printf("%s,%g,%g,%g,%d,%.6e,%.6e,%.4e\n", c.name, z.real(), z.imag(), t, l, rem, bound, ratio);
        }
      }
    }
  }
  std::fprintf(stderr, "max remainder/bound at k_scale=1: %.4f\nsuggested k_scale (safety %.1f): %.4f\n", worst,
               safety, worst * safety);
  return 0;
}
