#pragma once

#include <string>

#include "wtpleak/backend.hpp"
#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"
#include "wtpleak/retry.hpp"

namespace wtpleak {

struct InferenceOptions {
  RetryPolicy retry;
  int sanity_ceiling_dollars = 10000;  // estimates above are flagged, never clipped
};

// Extracts the first well-formed record embedded anywhere in raw: balanced
// JSON-object candidates are validated in order and the first valid one wins.
// Requires a positive integer estimate and a low/medium/high confidence
// (case-insensitive); key signals are padded or truncated to exactly three
// with a warning flag. Throws InferenceParseError (raw attached) otherwise.
InferenceReport parse_inference_output(const std::string& raw);

// Runs the inference agent on one transcript variant. The assembled input is
// exactly render_inference_prompt() plus the transcript text; retries cover
// both backend failures and unparseable completions.
InferenceReport infer_wtp(const Transcript& t, InferenceVariant variant,
                          CompletionBackend& backend, const InferenceOptions& options = {});

// Desk-scale decoder for scripted-family transcripts: role-coherent dialogues
// decode the engaged tier back to its catalog price band, privacy-gagged
// dialogues return the fixed population prior. Unrecognized dialects throw.
InferenceReport scripted_oracle_inference(const Transcript& t);
InferenceReport scripted_oracle_inference(const Transcript& t, const PackSet& packs);

// The constant estimate the oracle reports for privacy-gagged transcripts.
int gagged_prior_estimate_dollars();

}  // namespace wtpleak
