#pragma once

#include <string>
#include <vector>

#include "epkg/harness.hpp"

namespace epkg {

/// JSON documents (2-space indented). Non-finite numbers are written as null.
std::string criteria_json(const std::vector<CriterionResult>& c);
std::string fit_json(const DecayFit& f);
std::string simulation_json(const SimulationResult& r);
std::string lemma_json(const LemmaReport& r);
std::string kernel_scan_json(const KernelScan& k);
std::string normal_form_json(const NormalFormCheck& c);

/// Writes `text` to `path`, throwing Error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace epkg
