#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxtsp/tour.hpp"

namespace maxtsp {

inline constexpr int kCertificateVersion = 1;

using Json = nlohmann::ordered_json;

/// Exact ratio p/q in lowest terms.
struct Ratio {
  Weight p = 0;
  Weight q = 1;

  std::string exact() const;
  /// Six decimals, rounded half up.
  std::string decimal() const;
};

Ratio make_ratio(Weight num, Weight den);

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  const CheckResult* find(const std::string& name) const;
};

struct CertificateOptions {
  /// Compute OPT with the exact oracle when n is small enough.
  bool with_oracle = true;
  bool include_trace = false;
};

/// The certificate of one solve, with its invariant checklist filled in by
/// verify_certificate.
Json make_certificate(const CompleteGraph& g, const SolveResult& result, const SolveOptions& solve_options,
                      const CertificateOptions& options = {});

/// Re-checks a certificate against the instance using only the instance and the
/// certificate's own edge sets. Never throws on malformed content; reports it.
VerifyReport verify_certificate(const CompleteGraph& g, const Json& cert);

Json report_to_json(const VerifyReport& r);

std::string status_name(CheckStatus s);

}  // namespace maxtsp
