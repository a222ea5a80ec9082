// Times the parallel kernels against their serial reference paths and checks
// that both produce identical bytes. Usage: bench_kernels [n] [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "otlab/criteria.hpp"
#include "otlab/descriptions.hpp"
#include "otlab/moduli.hpp"
#include "otlab/parallel.hpp"
#include "otlab/transport.hpp"

using namespace otlab;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_of(int repeats, F&& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    body();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct BenchCase {
  const char* name = "";
  std::vector<double> serial_out{}, parallel_out{};
  double t_serial = 0.0, t_parallel = 0.0;
};

void report(const BenchCase& c) {
  const bool same = bitwise_equal(c.serial_out, c.parallel_out);
  std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   bytes %s\n", c.name,
              c.t_serial, c.t_parallel, c.t_serial / std::max(c.t_parallel, 1e-9),
              same ? "identical" : "DIFFER");
  if (!same) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 4096;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  std::printf("kernel benchmark, n = %d, best of %d, %d threads available\n", n, repeats,
              par::max_threads());

  const Grid g = Grid::uniform(-4.0, 4.0, n);
  std::vector<double> vvals(g.n);
  for (int i = 0; i < g.n; ++i) vvals[i] = 0.5 * g.x[i] * g.x[i];
  const GibbsPair gp = make_gibbs(g, vvals);
  const RadialProfile h = scaled_profile(0.5, quadratic_profile());

  std::vector<double> psi(g.n);
  for (int i = 0; i < g.n; ++i) psi[i] = std::sin(g.x[i]) - 0.1 * g.x[i] * g.x[i];

  {
    BenchCase c;
    c.name = "c_transform";
    par::set_enabled(false);
    c.t_serial = best_of(repeats, [&] { c.serial_out = c_transform(g, psi, h); });
    par::set_enabled(true);
    c.t_parallel = best_of(repeats, [&] { c.parallel_out = c_transform(g, psi, h); });
    report(c);
  }

  {
    BenchCase c;
    c.name = "verify_modulus pair scan";
    const Modulus sigma = power_modulus(2.0, 0.5, ModulusKind::convexity);
    const long long pairs = (long long)n * n;
    ModulusReport rs, rp;
    par::set_enabled(false);
    c.t_serial = best_of(repeats, [&] { rs = verify_modulus(gp.V, sigma, pairs); });
    par::set_enabled(true);
    c.t_parallel = best_of(repeats, [&] { rp = verify_modulus(gp.V, sigma, pairs); });
    c.serial_out = {rs.min_margin, rs.witness_x, rs.witness_y};
    c.parallel_out = {rp.min_margin, rp.witness_x, rp.witness_y};
    report(c);
  }

  {
    BenchCase c;
    c.name = "theorem_criterion scan";
    CostSystem sys{h, power_profile(2.0, 0.5), conjugate(h)};
    const Modulus sigma = power_modulus(2.0, 0.5, ModulusKind::convexity);
    const Modulus omega = power_modulus(2.0, 1.0, ModulusKind::monotonicity);
    CriterionReport rs, rp;
    const int n_z = 16 * n;
    par::set_enabled(false);
    c.t_serial = best_of(repeats, [&] { rs = theorem_criterion(sys, sigma, omega, 20.0, n_z); });
    par::set_enabled(true);
    c.t_parallel = best_of(repeats, [&] { rp = theorem_criterion(sys, sigma, omega, 20.0, n_z); });
    c.serial_out = rs.margin;
    c.parallel_out = rp.margin;
    report(c);
  }

  return 0;
}
