// temporary perf probe: solve desk-scale instances and print times
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include "mipbb/instances.hpp"
#include "mipbb/selectors.hpp"
using namespace mipbb;
int main(int argc, char** argv) {
  const std::string cls = argc > 1 ? argv[1] : "setcover";
  const int count = argc > 2 ? std::atoi(argv[2]) : 3;
  const int cols = argc > 3 ? std::atoi(argv[3]) : 0;
  const int rows = argc > 4 ? std::atoi(argv[4]) : 0;
  for (int s = 1; s <= count; ++s) {
    auto spec = make_spec(problem_class_from_string(cls), Scale::Desk, s);
    if (cols > 0) { spec.params.sc_cols = cols; spec.params.sc_rows = rows; }
    const auto model = generate(spec);
    BranchAndBound bb(model);
    DfsSelector dfs;
    SolveLimits lim;
    lim.time_seconds = 120;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = bb.solve(dfs, lim);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s seed=%d status=%d nodes=%ld lp_iters=%ld time=%.2fs obj=%.4f\n", cls.c_str(), s,
                static_cast<int>(r.status), r.nodes_processed, r.lp_iterations, secs,
                r.best_objective);
  }
  return 0;
}
