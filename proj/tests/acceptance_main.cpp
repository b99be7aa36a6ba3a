// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//   acceptance [--quick] [--criterion N] [--workers W]

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "horolab/acceptance.hpp"

int main(int argc, char** argv) {
  horolab::AcceptanceOptions opts;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      opts.quick = true;
    } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      opts.workers = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--quick] [--criterion N]... [--workers W]\n");
      return 2;
    }
  }
  if (ids.empty())
    for (int id = 1; id <= horolab::kNumCriteria; ++id) ids.push_back(id);

  bool all_pass = true;
  for (int id : ids) {
    const horolab::VerificationRow row = horolab::run_criterion(id, opts);
    std::printf("[%2d] %-22s %s  (%.1fs)  %s\n", row.id, row.name.c_str(),
                row.pass ? "PASS" : "FAIL", row.seconds, row.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && row.pass;
  }
  return all_pass ? 0 : 1;
}
