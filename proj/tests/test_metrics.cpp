// Copyright 2026 The diascore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "diascore/metrics.hpp"
#include "diascore/record_io.hpp"
#include "diascore/synth.hpp"
#include "oracles.hpp"

using namespace diascore;

namespace {

Registration make_registration(std::initializer_list<const char*> names) {
  std::vector<Registration::Entry> entries;
  for (const char* n : names) entries.push_back({SpeakerLabel(n), "desc"});
  return Registration(std::move(entries));
}

AttributedTranscript words(
    std::initializer_list<std::tuple<const char*, Ms, Ms, const char*>> segs) {
  std::vector<Segment> out;
  for (const auto& [name, start, end, text] : segs)
    out.push_back({SpeakerLabel(name), start, end, normalize(text)});
  return AttributedTranscript(std::move(out));
}

// Exact a/b <= c/d on non-negative fractions with positive denominators.
bool fraction_leq(const Fraction& a, const Fraction& b) {
  return a.num * b.den <= b.num * a.den;
}

}  // namespace

TEST_CASE("sa_wer is zero on the identity pair") {
  const auto reg = make_registration({"Alice", "Bob"});
  const auto ref = words({{"Alice", 0, 2000, "hello world"}, {"Bob", 2000, 4000, "good morning"}});
  CHECK(sa_wer(ref, ref, reg) == Fraction{0, 4});
}

TEST_CASE("sa_wer punishes swapped attribution that cp_wer forgives") {
  const auto reg = make_registration({"Alice", "Bob"});
  const auto ref = words({{"Alice", 0, 2000, "hello world"}, {"Bob", 2000, 4000, "good morning"}});
  const auto hyp = words({{"Alice", 0, 2000, "good morning"}, {"Bob", 2000, 4000, "hello world"}});
  CHECK(sa_wer(ref, hyp, reg) == Fraction{4, 4});  // 1.00
  CHECK(cp_wer(ref, hyp) == Fraction{0, 4});       // 0.0, the contrast case
}

TEST_CASE("sa_wer on an empty hypothesis is all deletions") {
  const auto reg = make_registration({"Alice", "Bob"});
  const auto ref = words({{"Alice", 0, 2000, "hello world"}, {"Bob", 2000, 4000, "good morning"}});
  CHECK(sa_wer(ref, AttributedTranscript(), reg) == Fraction{4, 4});
}

TEST_CASE("sa_wer drops hypothesis words on unregistered speakers") {
  const auto reg = make_registration({"Alice"});
  const auto ref = words({{"Alice", 0, 2000, "hello world"}});
  const auto hyp = words({{"Alice", 0, 2000, "hello world"}, {"Zed", 2000, 3000, "noise"}});
  CHECK(sa_wer(ref, hyp, reg) == Fraction{0, 2});
}

TEST_CASE("sa_wer errors") {
  const auto reg = make_registration({"Alice"});
  const auto empty_words = words({{"Alice", 0, 1000, ""}});
  CHECK_THROWS_AS(sa_wer(empty_words, empty_words, reg), EmptyReferenceError);
  const auto ghost = words({{"Ghost", 0, 1000, "boo"}});
  CHECK_THROWS_AS(sa_wer(ghost, ghost, reg), UnknownReferenceSpeakerError);
}

TEST_CASE("ier identity and simple confusions") {
  const auto reg = make_registration({"A", "B"});
  const auto ref = words({{"A", 0, 10000, ""}});
  CHECK(ier(ref, ref, reg) == Fraction{0, 10000});

  const auto hyp = words({{"A", 0, 8000, ""}, {"B", 8000, 10000, ""}});
  CHECK(ier(ref, hyp, reg) == Fraction{2000, 10000});  // 0.20

  CHECK(ier(ref, AttributedTranscript(), reg) == Fraction{10000, 10000});  // all miss
}

TEST_CASE("ier counts unregistered hypothesis false alarms in the numerator") {
  const auto reg = make_registration({"A"});
  const auto ref = words({{"A", 0, 1000, ""}});
  const auto hyp = words({{"A", 0, 1000, ""}, {"Z", 2000, 2500, ""}});
  CHECK(ier(ref, hyp, reg) == Fraction{500, 1000});
}

TEST_CASE("wer basics") {
  const std::vector<std::string> abc = {"a", "b", "c"};
  CHECK(wer(abc, abc) == Fraction{0, 3});
  CHECK(wer(abc, std::vector<std::string>{"a", "x", "c"}) == Fraction{1, 3});
  CHECK(wer(std::vector<std::string>{"a"}, abc) == Fraction{2, 1});  // > 100%
  CHECK_THROWS_AS(wer({}, abc), EmptyReferenceError);
}

TEST_CASE("cp_wer identity and spurious speakers") {
  const auto ref = words({{"Alice", 0, 2000, "hello world"}, {"Bob", 2000, 4000, "good morning"}});
  CHECK(cp_wer(ref, ref) == Fraction{0, 4});

  const auto spurious = words({{"Alice", 0, 2000, "hello world"},
                               {"Bob", 2000, 4000, "good morning"},
                               {"Zed", 4000, 5000, "x"}});
  CHECK(cp_wer(ref, spurious) == Fraction{1, 4});  // padding charges the extra word

  CHECK_THROWS_AS(cp_wer(words({{"A", 0, 1000, ""}}), ref), EmptyReferenceError);
  CHECK(cp_wer(ref, AttributedTranscript()) == Fraction{4, 4});
}

TEST_CASE("cp_wer equals brute-force search over mappings") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    // Small conversations, then perturbed copies.
    SynthConfig cfg;
    cfg.seed = rng.next();
    cfg.n_speakers = static_cast<int>(1 + rng.below(3));
    cfg.n_turns = static_cast<int>(1 + rng.below(5));
    cfg.words_per_turn = {1, 4};
    cfg.vocabulary = 6;
    auto [ref, reg] = gen_conversation(cfg);
    auto hyp = perturb(ref, SubstituteWords{0.4, rng.next()});
    if (rng.unit() < 0.5) hyp = perturb(hyp, DropSegments{0.3, rng.next()});

    // Independent route: enumerate all injective row->column mappings of
    // the padded matrix via brute_force_assignment.
    const auto ref_speakers = ref.speakers();
    const auto hyp_speakers = hyp.speakers();
    const std::size_t n = std::max(ref_speakers.size(), hyp_speakers.size());
    CostMatrix costs(n, n, 0);
    std::int64_t ref_words = 0;
    for (std::size_t r = 0; r < ref_speakers.size(); ++r)
      ref_words += static_cast<std::int64_t>(concat_per_speaker(ref, ref_speakers[r]).size());
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t r = 0; r < n; ++r) {
        const auto hyp_tokens = h < hyp_speakers.size()
                                    ? concat_per_speaker(hyp, hyp_speakers[h])
                                    : std::vector<std::string>{};
        const auto ref_tokens = r < ref_speakers.size()
                                    ? concat_per_speaker(ref, ref_speakers[r])
                                    : std::vector<std::string>{};
        costs.set(h, r, word_edit_distance(ref_tokens, hyp_tokens).distance());
      }
    const auto expected = brute_force_assignment(costs).total_cost;
    CHECK(cp_wer(ref, hyp) == Fraction{expected, ref_words});
  }
}

TEST_CASE("der absorbs a global relabeling that ier punishes") {
  const auto reg = make_registration({"A", "B"});
  const auto ref = words({{"A", 0, 4000, ""}, {"B", 4000, 10000, ""}});
  const auto swapped = words({{"B", 0, 4000, ""}, {"A", 4000, 10000, ""}});
  CHECK(der(ref, swapped).num == 0);
  CHECK(ier(ref, swapped, reg) == Fraction{10000, 10000});  // pure confusion
  CHECK(der(ref, AttributedTranscript()) == Fraction{10000, 10000});
}

TEST_CASE("der leaves zero-overlap hypothesis speakers unmatched") {
  // Hypothesis speaker C never overlaps reference speech; matching it to a
  // silent reference speaker would turn silence FA into per-speaker FA.
  const auto ref = words({{"A", 0, 1000, ""}, {"B", 1000, 2000, ""}});
  const auto hyp = words({{"A", 0, 1000, ""}, {"B", 1000, 2000, ""}, {"C", 3000, 4000, ""}});
  CHECK(der(ref, hyp) == Fraction{1000, 2000});
}

TEST_CASE("sv_error counts wrong and unparseable answers") {
  std::vector<SvTrial> trials = {{Polarity::yes, Polarity::yes},
                                 {Polarity::no, Polarity::no},
                                 {Polarity::yes, Polarity::yes},
                                 {Polarity::no, Polarity::no}};
  CHECK(sv_error(trials) == Fraction{0, 4});
  trials[0].answer = Polarity::no;
  CHECK(sv_error(trials) == Fraction{1, 4});
  trials[1].answer = Polarity::unparseable;
  CHECK(sv_error(trials) == Fraction{2, 4});
  CHECK_THROWS_AS(sv_error({}), EmptyInputError);
}

TEST_CASE("si_error counts wrong and unparseable answers") {
  std::vector<SiTrial> trials(10, SiTrial{"B", "B"});
  CHECK(si_error(trials) == Fraction{0, 10});
  trials[0].answer = "A";
  trials[1].answer = std::nullopt;
  CHECK(si_error(trials) == Fraction{2, 10});
  CHECK_THROWS_AS(si_error({}), EmptyInputError);
}

TEST_CASE("iou basics and the rasterized oracle") {
  const BoundingBox unit{0, 0, 1, 1, BoxUnit::pixel};
  CHECK(iou(unit, unit) == 1.0);
  CHECK(iou(unit, BoundingBox{5, 5, 6, 6, BoxUnit::pixel}) == 0.0);

  const BoundingBox a{0, 0, 2, 2, BoxUnit::pixel};
  const BoundingBox b{1, 0, 3, 2, BoxUnit::pixel};
  CHECK(iou(a, b) == Catch::Approx(1.0 / 3.0));
  CHECK(iou(a, b) == Catch::Approx(oracles::iou_rasterized(a, b)).margin(0.02));

  CHECK_THROWS_AS(iou(unit, BoundingBox{0, 0, 1, 1, BoxUnit::normalized}), UnitMismatchError);
}

TEST_CASE("sl_miss_rate counts unparseable, low-iou, and unit-mismatched predictions") {
  const std::vector<BoundingBox> gts = {{0, 0, 10, 10, BoxUnit::pixel},
                                        {0, 0, 10, 10, BoxUnit::pixel},
                                        {0, 0, 10, 10, BoxUnit::pixel},
                                        {20, 20, 30, 30, BoxUnit::pixel}};
  std::vector<std::optional<BoundingBox>> preds = {
      BoundingBox{0, 0, 10, 10, BoxUnit::pixel},
      BoundingBox{0, 0, 10, 10, BoxUnit::pixel},
      BoundingBox{0, 0, 10, 10, BoxUnit::pixel},
      BoundingBox{40, 40, 50, 50, BoxUnit::pixel}};  // disjoint from its gt
  CHECK(sl_miss_rate(preds, gts) == Fraction{1, 4});

  preds[3] = preds[0];  // exact hits everywhere
  preds[3]->x1 = 20; preds[3]->y1 = 20; preds[3]->x2 = 30; preds[3]->y2 = 30;
  CHECK(sl_miss_rate(preds, gts) == Fraction{0, 4});

  std::vector<std::optional<BoundingBox>> blanks(4);
  CHECK(sl_miss_rate(blanks, gts) == Fraction{4, 4});

  preds[0]->unit = BoxUnit::normalized;
  CHECK(sl_miss_rate(preds, gts) == Fraction{1, 4});  // unit mismatch is a miss
  CHECK_THROWS_AS(sl_miss_rate({}, {}), EmptyInputError);
}

TEST_CASE("sl center mode accepts any prediction centered on the target") {
  const std::vector<BoundingBox> gts = {{0, 0, 10, 10, BoxUnit::pixel}};
  const std::vector<std::optional<BoundingBox>> preds = {
      BoundingBox{4, 4, 40, 40, BoxUnit::pixel}};  // iou tiny, center at (22, 22)... outside
  CHECK(sl_miss_rate(preds, gts, 0.5, SlMode::center) == Fraction{1, 1});
  const std::vector<std::optional<BoundingBox>> centered = {
      BoundingBox{2, 2, 12, 12, BoxUnit::pixel}};  // center (7,7) inside the gt
  CHECK(sl_miss_rate(centered, gts, 0.5, SlMode::iou) == Fraction{1, 1});
  CHECK(sl_miss_rate(centered, gts, 0.5, SlMode::center) == Fraction{0, 1});
}

TEST_CASE("aggregate_avg reproduces published row means") {
  const std::vector<double> row_a = {1.9, 13.2, 0.8, 1.0, 21.1, 47.1, 28.5};
  CHECK(aggregate_avg(row_a) == Catch::Approx(16.2).margin(0.05));
  const std::vector<double> row_b = {1.39, 5.2, 12.8, 5.5, 30.5, 36.6, 36.3};
  CHECK(aggregate_avg(row_b) == Catch::Approx(18.3).margin(0.05));
  const std::vector<double> zeros(7, 0.0);
  CHECK(aggregate_avg(zeros) == 0.0);
  CHECK_THROWS_AS(aggregate_avg(std::vector<double>(6, 0.0)), WrongArityError);
}

// --- metamorphic relations -------------------------------------------------

namespace {

struct RandomPair {
  AttributedTranscript ref, hyp;
  Registration reg;
};

// allow_label_ops=false restricts perturbation to word/time/segment noise,
// leaving the hypothesis label-aligned with the reference.
RandomPair random_pair(SplitMix64& rng, bool allow_label_ops) {
  SynthConfig cfg;
  cfg.seed = rng.next();
  cfg.n_speakers = static_cast<int>(2 + rng.below(3));
  cfg.n_turns = static_cast<int>(3 + rng.below(6));
  cfg.words_per_turn = {1, 5};
  cfg.overlap_probability = 0.25;
  auto [ref, reg] = gen_conversation(cfg);

  auto hyp = ref;
  const int n_ops = static_cast<int>(1 + rng.below(3));
  for (int i = 0; i < n_ops; ++i) {
    switch (allow_label_ops ? rng.below(4) : 1 + rng.below(3)) {
      case 0: {
        const auto speakers = hyp.speakers();
        if (speakers.size() >= 2) {
          const auto a = speakers[rng.below(speakers.size())];
          const auto b = speakers[rng.below(speakers.size())];
          hyp = perturb(hyp, SwapLabels{a, b});
        }
        break;
      }
      case 1:
        hyp = perturb(hyp, ShiftAll{static_cast<Ms>(rng.below(800))});
        break;
      case 2:
        hyp = perturb(hyp, SubstituteWords{0.3, rng.next()});
        break;
      default:
        hyp = perturb(hyp, DropSegments{0.25, rng.next()});
        break;
    }
  }
  return {std::move(ref), std::move(hyp), std::move(reg)};
}

}  // namespace

TEST_CASE("relaxed metrics never exceed identity-fixed metrics on registered labels") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto pair = random_pair(rng, /*allow_label_ops=*/true);
    CHECK(fraction_leq(cp_wer(pair.ref, pair.hyp), sa_wer(pair.ref, pair.hyp, pair.reg)));
    CHECK(fraction_leq(der(pair.ref, pair.hyp), ier(pair.ref, pair.hyp, pair.reg)));
  }
}

TEST_CASE("consistent renaming leaves identity-fixed metrics unchanged") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pair = random_pair(rng, true);
    auto rename = [](const AttributedTranscript& t) {
      std::vector<Segment> segs = t.segments();
      for (auto& s : segs) s.speaker = SpeakerLabel("re-" + s.speaker.name());
      return AttributedTranscript(std::move(segs));
    };
    std::vector<Registration::Entry> entries;
    for (const auto& e : pair.reg.entries())
      entries.push_back({SpeakerLabel("re-" + e.label.name()), e.description});
    const Registration renamed_reg(std::move(entries));

    CHECK(sa_wer(pair.ref, pair.hyp, pair.reg) ==
          sa_wer(rename(pair.ref), rename(pair.hyp), renamed_reg));
    CHECK(ier(pair.ref, pair.hyp, pair.reg) ==
          ier(rename(pair.ref), rename(pair.hyp), renamed_reg));
  }
}

TEST_CASE("hypothesis-only renaming leaves relaxed metrics unchanged") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pair = random_pair(rng, true);
    auto rename = [](const AttributedTranscript& t) {
      std::vector<Segment> segs = t.segments();
      for (auto& s : segs) s.speaker = SpeakerLabel("zz-" + s.speaker.name());
      return AttributedTranscript(std::move(segs));
    };
    CHECK(cp_wer(pair.ref, pair.hyp) == cp_wer(pair.ref, rename(pair.hyp)));
    CHECK(der(pair.ref, pair.hyp) == der(pair.ref, rename(pair.hyp)));
  }
}

TEST_CASE("swapping two hypothesis labels keeps relaxed metrics, never improves fixed ones") {
  // The hypothesis starts label-aligned (word/time noise only), so a label
  // swap can only hurt the identity-fixed metrics.
  SplitMix64 rng(37);
  int done = 0;
  for (int trial = 0; trial < 40 && done < 20; ++trial) {
    const auto pair = random_pair(rng, /*allow_label_ops=*/false);
    const auto speakers = pair.hyp.speakers();
    if (speakers.size() < 2) continue;
    ++done;
    const auto swapped = perturb(pair.hyp, SwapLabels{speakers[0], speakers[1]});

    CHECK(cp_wer(pair.ref, pair.hyp) == cp_wer(pair.ref, swapped));
    CHECK(der(pair.ref, pair.hyp) == der(pair.ref, swapped));
    CHECK(fraction_leq(sa_wer(pair.ref, pair.hyp, pair.reg),
                       sa_wer(pair.ref, swapped, pair.reg)));
    CHECK(fraction_leq(ier(pair.ref, pair.hyp, pair.reg), ier(pair.ref, swapped, pair.reg)));
  }
  CHECK(done >= 10);
}
