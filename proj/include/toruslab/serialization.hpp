#pragma once

#include <string>

#include <json.hpp>

#include "toruslab/action_polynomial.hpp"
#include "toruslab/birkhoff.hpp"
#include "toruslab/diophantine.hpp"
#include "toruslab/escape.hpp"
#include "toruslab/fourier_taylor.hpp"
#include "toruslab/steepness.hpp"

namespace toruslab {

// Series terms are stored in cos/sin form over canonical k: "re" is the
// cos amplitude, "im" the sin amplitude, so the file is real and the
// mirrored coefficient is implicit. Round trip is bit exact.
nlohmann::json series_to_json(const FourierTaylorSeries& f);
FourierTaylorSeries series_from_json(const nlohmann::json& j);

nlohmann::json polynomial_to_json(const ActionPolynomial& p);
ActionPolynomial polynomial_from_json(const nlohmann::json& j);

nlohmann::json diophantine_report_to_json(const DiophantineReport& r);
nlohmann::json membership_report_to_json(const OmegaMembershipReport& r);
nlohmann::json normal_form_to_json(const NormalFormResult& r);
nlohmann::json steepness_verdict_to_json(const SteepnessVerdict& v);
nlohmann::json escape_record_to_json(const EscapeTimeRecord& r);
EscapeTimeRecord escape_record_from_json(const nlohmann::json& j);

// Pretty-printed with a trailing newline; parent directories are created.
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

void write_jsonl_file(const std::string& path,
                      const std::vector<nlohmann::json>& rows);
std::vector<nlohmann::json> read_jsonl_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace toruslab
