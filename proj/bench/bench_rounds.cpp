// Times the serial reference round loop against the OpenMP kernel on the
// default scenario and checks that both produce the same results.
//
//   bench_rounds [rounds] [threads]

#include <omp.h>

#include <cstdlib>
#include <iostream>

#include "isac/mcengine.hpp"

namespace {

bool same(const std::vector<isac::RoundResult>& a, const std::vector<isac::RoundResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].resident_sinr != b[i].resident_sinr) return false;
    if (a[i].resident_rate_bps != b[i].resident_rate_bps) return false;
    if (a[i].sensing.has_value() != b[i].sensing.has_value()) return false;
    if (a[i].sensing && a[i].sensing->present_w != b[i].sensing->present_w) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t rounds = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
  const int threads = argc > 2 ? std::atoi(argv[2]) : omp_get_num_procs();

  isac::ScenarioConfig config;
  config.master_seed = 42;

  double t0 = omp_get_wtime();
  const auto serial = isac::run_rounds_serial(config, 0, rounds);
  const double serial_s = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  const auto parallel = isac::run_rounds(config, 0, rounds, threads);
  const double parallel_s = omp_get_wtime() - t0;

  std::cout << "rounds        " << rounds << "\n"
            << "serial        " << serial_s << " s (" << 1e6 * serial_s / rounds << " us/round)\n"
            << "openmp x" << threads << "    " << parallel_s << " s ("
            << 1e6 * parallel_s / rounds << " us/round)\n"
            << "speedup       " << serial_s / parallel_s << "\n"
            << "identical     " << (same(serial, parallel) ? "yes" : "NO") << "\n";
  return same(serial, parallel) ? 0 : 1;
}
