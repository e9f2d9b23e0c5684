#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldic/channel.hpp"
#include "ldic/gf2.hpp"
#include "ldic/rational.hpp"

namespace ldic::scheme {

// Block coding run: B message blocks plus one terminal block that carries
// only the helper payload for block B. All rates are bits per symbol and
// must give whole bit counts when multiplied by N.
struct SchemeConfig {
  ChannelParams params;
  FeedbackDist dist;
  int N = 1;
  int B = 1;
  Rational R1p, R1c, R2p, R2c;  // message rates (private / common, per user)
  Rational r1, r2;              // quantizer bin rates
  Rational delta = Rational(1, 2);  // required covering margin on r1, r2

  // Throws with the offending product or margin when a rate is not an
  // N-integral bit count or r_i < p_j * n_ji + delta.
  void validate() const;

  // N * rate as an exact bit count; part of validate's contract.
  std::int64_t bits(const Rational& rate) const;
};

SchemeConfig parse_scheme_config(const std::string& json_text);
SchemeConfig load_scheme_config(const std::string& path);
std::string scheme_config_to_json(const SchemeConfig& cfg);

// All generator material, drawn uniformly from the seed. c/p are the
// common and private codebooks, l the per-symbol helper maps, hash the
// quantizer binning matrices. Draws failing the rank checks (injectivity
// where dimensions allow it, and full generic rank of the combined
// helper-to-output maps) are redrawn a bounded number of times.
struct CodebookSet {
  gf2::Mat c1, p1, l1, hash1;
  gf2::Mat c2, p2, l2, hash2;
  int resamples = 0;
  // True when the steady-state block system has no disqualifying kernel at
  // the all-on state pattern for either receiver, so a rate point inside
  // the region decodes every trial when feedback is always on. Draws are
  // resampled toward this; rate points with a structural kernel (outside
  // the region) exhaust the budget and come back uncertified but usable.
  bool decode_certified = false;
};

CodebookSet generate_codebooks(const SchemeConfig& cfg, std::uint64_t seed);

// Fresh message words per block, index 0 = block 1.
struct Messages {
  std::vector<gf2::Vec> w1c, w1p, w2c, w2p;
};

Messages sample_messages(const SchemeConfig& cfg, std::uint64_t seed);

// Everything produced in one block: channel signals, the gated cross
// signals, their fresh parts after helper removal, and the bin indices.
// Vectors concatenate N symbols. `agree` records that the per-transmitter
// reconstructions of the shared quantities were bitwise identical.
struct BlockTrace {
  gf2::Vec x1, x2, y1, y2;
  gf2::Vec vt1, vt2;  // state-gated cross signals (bottom-aligned content)
  gf2::Vec vb1, vb2;  // fresh parts: helper contribution removed
  gf2::Vec q1, q2;    // bin indices of vb1, vb2
  bool agree = false;
};

// Full forward pass over blocks 1..B+1 for fixed states and messages.
struct Transmission {
  std::vector<BlockTrace> blocks;
};

Transmission encode_all(const SchemeConfig& cfg, const CodebookSet& books,
                        const Messages& msgs, const StateSeq& states);

struct DecodeOptions {
  bool w2c_ambiguity_is_error = false;  // count cross-common ties (diagnostic)
};

// Backward pass for one receiver. Message estimates per block, plus what
// went wrong if anything: `ambiguous` when some block's solution set
// projected to more than one point, `inconsistent` when a propagated
// error made a later system unsolvable, `outage` when a state sequence's
// active bin content exceeded what the hash can invert.
struct DecodeResult {
  std::vector<gf2::Vec> wc, wp;  // this user's decoded words, index 0 = block 1
  std::vector<bool> block_ok;    // per block: solved with a unique projection
  bool ok = false;
  bool ambiguous = false;
  bool inconsistent = false;
  bool outage = false;
};

// y_blocks holds Y^N for blocks 1..B+1 at this receiver. When genie_q is
// given (pairs (q1, q2) per block 1..B) the decoder uses those true bin
// indices instead of chaining through its own recovered ones.
DecodeResult backward_decode(int user, const SchemeConfig& cfg, const CodebookSet& books,
                             const std::vector<gf2::Vec>& y_blocks, const StateSeq& states,
                             const DecodeOptions& opt = {},
                             const std::vector<std::pair<gf2::Vec, gf2::Vec>>* genie_q = nullptr);

struct TrialOptions {
  bool genie = false;        // also run the genie-aided decoder
  bool keep_traces = false;  // retain per-block signals
  DecodeOptions decode;
};

struct TrialResult {
  bool ok1 = false, ok2 = false;
  bool genie_ok1 = false, genie_ok2 = false;
  bool outage = false;
  std::vector<bool> block_ok;  // per message block: both users' words correct
  std::vector<BlockTrace> traces;
};

// One seeded end-to-end run: sample states and messages, encode, decode
// both receivers, compare against the true words.
TrialResult run_trial(const SchemeConfig& cfg, const CodebookSet& books, std::uint64_t seed,
                      const TrialOptions& opt = {});

// Hex dump of a transmission for fixtures and debugging.
std::string trial_trace_to_json(const SchemeConfig& cfg, const std::vector<BlockTrace>& traces);

}  // namespace ldic::scheme
