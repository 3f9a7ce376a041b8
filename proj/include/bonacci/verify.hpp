#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bonacci/field.hpp"

namespace bonacci {

enum class CheckStatus { pass, fail, info };

struct CheckResult {
    std::string suite;
    std::string name;
    int d = 0; // 0 for checks not tied to one degree
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct VerifyOptions {
    std::size_t samples = 200;
    int coeff_bound = 3;
    std::uint64_t seed = 0;
    int precision_bits = default_precision_bits;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    std::size_t failed() const;
    std::string to_json() const;
};

/// periodic, conjugacy, measure, degree, paper-examples.
const std::vector<std::string>& verify_suites();

/// Runs one suite (or "all") for every d in ds; invalid_parameter for an
/// unknown suite or d < 2.
VerifyReport run_verify(const std::vector<int>& ds, const std::string& suite, const VerifyOptions& opts = {});

std::vector<CheckResult> verify_periodic(const ContextPtr& ctx, const VerifyOptions& opts);
std::vector<CheckResult> verify_conjugacy(const ContextPtr& ctx, const VerifyOptions& opts);
std::vector<CheckResult> verify_measure(const ContextPtr& ctx, const VerifyOptions& opts);
std::vector<CheckResult> verify_degree(const ContextPtr& ctx, const VerifyOptions& opts);
std::vector<CheckResult> verify_worked_examples(const VerifyOptions& opts);

/// No run of d+1 equal digits.
bool balanced_runs_ok(const std::vector<int>& word, int d);

} // namespace bonacci
