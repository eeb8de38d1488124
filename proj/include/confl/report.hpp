#pragma once

#include "confl/analysis.hpp"

#include <json.hpp>

#include <string>

namespace confl {

/// Human-readable report. Deterministic: equal results print equal bytes.
std::string report_text(const AnalysisResult& res, const IndexedTrs& trs);

/// Machine-checkable report with the same content, keys in insertion order.
nlohmann::ordered_json report_json(const AnalysisResult& res, const IndexedTrs& trs);

nlohmann::ordered_json step_json(const LabelledStep& s);
nlohmann::ordered_json subst_json(const Substitution& s);

} // namespace confl
