#pragma once

// Randomized law suites over a language and over a representation:
// monad laws of substitution, constructor compatibility, subject reduction,
// monotonicity, satisfaction and the colax laws of the fold.

#include <cstdint>
#include <string>
#include <vector>

#include "bindsig/model.hpp"
#include "bindsig/sample.hpp"

namespace bindsig {

struct LawResult {
  explicit LawResult(std::string law = {}) : name(std::move(law)) {}

  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;  // search ran out of fuel
  std::vector<std::string> failures;  // first few, for the report

  bool ok() const { return failed == 0 && inconclusive == 0; }
  void pass() { ++passed; }
  void fail(std::string why);
  void unknown(std::string why);
};

struct LawOptions {
  std::uint64_t seed = default_seed;
  std::size_t samples = 200;
  std::size_t fuel = 2000;
  std::size_t max_size = 8;
  std::size_t trace_steps = 4;
  std::size_t instances = 20;  // rule instances per rule for satisfaction
};

struct LawReport {
  std::string signature;
  std::string representation;  // empty for language-only suites
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<LawResult> laws;

  bool ok() const;
  const LawResult* find(const std::string& name) const;
};

LawReport run_language_laws(const TwoSignature& sig, const LawOptions& opts = {});
/// Laws of the fold of `rep`; the source language laws are not included.
LawReport run_representation_laws(const Representation& rep, const LawOptions& opts = {});

std::string format_report(const LawReport& report);

}  // namespace bindsig
