#include "wtpleak/inference.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <nlohmann/json.hpp>

#include "wtpleak/errors.hpp"
#include "wtpleak/prompts.hpp"
#include "wtpleak/scripted.hpp"

namespace wtpleak {

using nlohmann::json;

namespace {

// Balanced top-level {...} candidates, string- and escape-aware.
std::vector<std::string> brace_candidates(const std::string& raw) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '{') {
      ++i;
      continue;
    }
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t start = i;
    std::size_t j = i;
    for (; j < raw.size(); ++j) {
      char c = raw[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          out.push_back(raw.substr(start, j - start + 1));
          break;
        }
      }
    }
    i = (depth == 0 && j < raw.size()) ? j + 1 : start + 1;
  }
  return out;
}

bool extract_estimate(const json& j, int& estimate) {
  if (!j.contains("estimate")) return false;
  const auto& e = j["estimate"];
  if (e.is_number_integer()) {
    estimate = e.get<int>();
    return true;
  }
  if (e.is_number_float()) {
    double v = e.get<double>();
    if (v != static_cast<int>(v)) return false;
    estimate = static_cast<int>(v);
    return true;
  }
  if (e.is_string()) {
    const std::string s = e.get<std::string>();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
          return std::isdigit(c) != 0;
        }))
      return false;
    try {
      estimate = std::stoi(s);
    } catch (const std::exception&) {
      return false;
    }
    return true;
  }
  return false;
}

bool validate_candidate(const std::string& candidate, InferenceReport& report) {
  json j = json::parse(candidate, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;

  int estimate = 0;
  if (!extract_estimate(j, estimate) || estimate <= 0) return false;

  if (!j.contains("confidence") || !j["confidence"].is_string()) return false;
  Confidence confidence;
  try {
    confidence = confidence_from_string(j["confidence"].get<std::string>());
  } catch (const ValidationError&) {
    return false;
  }

  std::vector<std::string> signals;
  if (j.contains("key_signals") && j["key_signals"].is_array()) {
    for (const auto& s : j["key_signals"]) {
      if (s.is_string()) signals.push_back(s.get<std::string>());
    }
  }

  report.estimate = estimate;
  report.confidence = confidence;
  report.signal_count_adjusted = signals.size() != 3;
  signals.resize(3);  // pad with empty strings or truncate
  std::copy(signals.begin(), signals.end(), report.key_signals.begin());
  return true;
}

}  // namespace

InferenceReport parse_inference_output(const std::string& raw) {
  for (const auto& candidate : brace_candidates(raw)) {
    InferenceReport report;
    if (validate_candidate(candidate, report)) {
      report.raw = raw;
      return report;
    }
  }
  throw InferenceParseError("no valid inference record found in completion", raw);
}

InferenceReport infer_wtp(const Transcript& t, InferenceVariant variant,
                          CompletionBackend& backend, const InferenceOptions& options) {
  if (t.turns.empty()) throw ValidationError("inference requires a non-empty transcript");

  const std::string prompt = render_inference_prompt();
  const std::string transcript_text = render_transcript(t);

  int retries_used = 0;
  std::string parse_failure;
  auto attempt = [&]() -> std::string {
    std::string completion = backend.complete(prompt, {{Role::buyer, transcript_text}});
    // An unparseable completion is retried like a failed one.
    try {
      parse_inference_output(completion);
    } catch (const InferenceParseError& e) {
      parse_failure = completion;
      throw BackendError(std::string("unparseable inference output: ") + e.what());
    }
    return completion;
  };

  std::string completion;
  try {
    completion = run_with_retries(attempt, options.retry, &retries_used);
  } catch (const BackendError&) {
    if (!parse_failure.empty())
      throw InferenceParseError("inference output unparseable after retries", parse_failure);
    throw;
  }

  InferenceReport report = parse_inference_output(completion);
  report.variant = variant;
  report.retries_used = retries_used;
  report.above_sanity_ceiling = report.estimate > options.sanity_ceiling_dollars;
  return report;
}

int gagged_prior_estimate_dollars() { return 185; }

InferenceReport scripted_oracle_inference(const Transcript& t) {
  return scripted_oracle_inference(t, builtin_packs());
}

InferenceReport scripted_oracle_inference(const Transcript& t, const PackSet& packs) {
  if (t.turns.empty() || t.turns.front().role != Role::buyer)
    throw ValidationError("oracle decoder requires a transcript starting with a buyer turn");

  InferenceReport report;
  report.variant = InferenceVariant::full;

  if (is_gagged_scripted_opening(t.turns.front().text)) {
    report.estimate = gagged_prior_estimate_dollars();
    report.confidence = Confidence::low;
    report.key_signals = {"generic feature questions with no price anchor",
                          "no tier narrowing across turns",
                          "population prior applied"};
    return report;
  }

  const auto codes = engaged_codes_in_buyer_turns(t, packs.catalog);
  std::string key(codes.begin(), codes.end());
  static const std::map<std::string, int> decode{
      {"AB", 55}, {"B", 100}, {"BC", 150}, {"CD", 220}, {"D", 300}, {"E", 500}};
  auto it = decode.find(key);
  if (it == decode.end())
    throw ValidationError("unrecognized scripted dialect: engaged set '" + key + "'");

  report.estimate = it->second + scripted_decision_offset(t);
  report.confidence = codes.size() == 1 ? Confidence::high : Confidence::medium;
  report.key_signals = {"engaged products: " + key,
                        "price reactions around the engaged tier",
                        "commitment within the turn limit"};
  return report;
}

}  // namespace wtpleak
