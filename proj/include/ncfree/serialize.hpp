#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ncfree/conjugate.hpp"
#include "ncfree/randmat.hpp"
#include "ncfree/trace.hpp"

namespace ncfree::io {

using Json = nlohmann::ordered_json;

// Spec documents look like
//   {"family": "semicircular", "n": 2, "variances": ["1", "1/2"], "degree_bound": 12,
//    "ensemble": {"dim": 500, "samples": 20, "seed": 1, "generators": [{"type": "gue", "variance": 1}]}}
// with "free" taking "moments": [["0", "1", ...], ...] and "explicit" taking
// "moments": [{"word": "Z 1 1", "value": "1"}, ...]. Rationals may be strings or integers.

DistributionSpec spec_from_json(const Json& doc);
Json spec_to_json(const DistributionSpec& spec);

/// The optional "ensemble" section; nullopt when absent.
std::optional<randmat::EnsembleConfig> ensemble_from_json(const Json& doc);
Json ensemble_to_json(const randmat::EnsembleConfig& config);

/// Read a whole file. Throws Error if it cannot be opened; ParseError on malformed JSON.
Json load_document(const std::string& path);
std::string read_file(const std::string& path);

Json report_to_json(const VerificationReport& report);
Json kernel_to_json(const std::vector<NcPoly>& kernel);

/// Summary without the raw eigenvalues (those go to CSV, or are added on request).
Json spectral_to_json(const randmat::SpectralReport& report, bool with_eigenvalues = false);
/// One eigenvalue per line under an "eigenvalue" header, printed with round-trip precision.
std::string eigenvalues_csv(const randmat::SpectralReport& report);
std::string histogram_csv(const randmat::Histogram& hist);

/// %.17g, so equal doubles always print identically.
std::string format_double(double x);

}  // namespace ncfree::io
