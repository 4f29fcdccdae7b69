#ifndef CATDEL_LAWS_HPP_
#define CATDEL_LAWS_HPP_

// Seeded law-verification suites. Each suite is deterministic per seed.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace catdel {

struct Failure {
  std::string case_id;
  std::string check;
  std::string witness;
};

struct Report {
  std::string suite;
  std::size_t cases = 0;
  std::vector<Failure> failures;
  std::vector<std::string> notes;
  double seconds = 0;

  bool ok() const { return failures.empty(); }
};

struct LawOptions {
  std::uint64_t seed = 0;
  std::size_t cases = 0;     // 0: the suite's default
  std::size_t max_size = 0;  // 0: the suite's default
};

/// rel-laws, duality, beck-chevalley, topological, pal-reduction,
/// del-reduction, no-learning, sheaf, fo-reduction.
const std::vector<std::string>& suite_names();

/// Throws UnknownSymbol for an unknown suite.
Report run_suite(std::string_view name, const LawOptions& opts = {});

/// The rel-laws checks against a dagger that drops a pair; the report must
/// contain failures.
Report run_self_test(const LawOptions& opts = {});

}  // namespace catdel

#endif  // CATDEL_LAWS_HPP_
