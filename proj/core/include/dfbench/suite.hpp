#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace dfbench {

enum class Suite {
  kStringSearch,
  kDeletedFileRecovery,
  kFileCarving,
  kWindowsRegistry,
  kSqlite,
};

inline constexpr std::array<Suite, 5> kAllSuites = {
    Suite::kStringSearch, Suite::kDeletedFileRecovery, Suite::kFileCarving,
    Suite::kWindowsRegistry, Suite::kSqlite};

// Canonical storage name, e.g. "string_search".
std::string_view SuiteName(Suite suite);
// Short label used in report summary rows, e.g. "FSS".
std::string_view SuiteAbbreviation(Suite suite);

// Accepts the canonical name, the abbreviation, or a common alias
// ("carving", "registry", ...), case-insensitively.
std::optional<Suite> ParseSuite(std::string_view text);

// Infers the suite from a CFTT-style identifier: FT-SS-*, DFR-*, carve-*,
// NR-/CR-/MR-*, SFT-*.
std::optional<Suite> SuiteForTestCase(std::string_view test_case);

// Collapses a sub-test-case identifier onto its main test case, e.g.
// "DFR-01-MAC" -> "DFR-01", "FT-SS-03-win" -> "FT-SS-03". Identifiers that
// do not follow a known pattern are returned unchanged.
std::string MainTestCase(std::string_view test_case);

}  // namespace dfbench
