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

// diascore — scoring for speaker-attributed, time-stamped transcription.
//
//   diascore score --manifest eval.json --format table
//   diascore score-pair ref.txt hyp.txt --task vrsdr --registration reg.txt
//   diascore synth --seed 7 --speakers 3 --out-ref ref.txt --out-reg reg.txt
//   diascore convert ref.txt ref.rttm --to rttm

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diascore/record_io.hpp"
#include "diascore/report.hpp"
#include "diascore/runner.hpp"
#include "diascore/synth.hpp"

namespace {

constexpr const char* kVersion = "diascore 0.1.0";

diascore::PerturbOp parse_perturb_spec(const std::string& spec) {
  using namespace diascore;
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

  auto split_on = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const auto next = s.find(sep, pos);
      parts.push_back(s.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return parts;
  };

  if (name == "swap_labels") {
    const auto parts = split_on(args, ',');
    if (parts.size() != 2) throw CLI::ValidationError("swap_labels needs 'A,B'");
    return SwapLabels{SpeakerLabel(parts[0]), SpeakerLabel(parts[1])};
  }
  if (name == "shift_all") {
    return ShiftAll{std::stoll(args)};
  }
  if (name == "substitute_words" || name == "drop_segments") {
    const auto parts = split_on(args, ':');
    if (parts.size() != 2)
      throw CLI::ValidationError(name + " needs 'rate:seed'");
    const double rate = std::stod(parts[0]);
    const std::uint64_t seed = std::stoull(parts[1]);
    if (name == "substitute_words") return SubstituteWords{rate, seed};
    return DropSegments{rate, seed};
  }
  if (name == "relabel_to_unregistered") {
    return RelabelToUnregistered{SpeakerLabel(args)};
  }
  throw CLI::ValidationError("unknown perturbation '" + name + "'");
}

void emit_report_text(const diascore::RunReport& report, const std::string& format,
                      const std::string& out_path) {
  std::string text;
  if (format == "json")
    text = diascore::render_json(report);
  else if (format == "csv")
    text = diascore::render_csv(report);
  else
    text = diascore::render_table(report);

  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    diascore::write_text_file(out_path, text);
}

struct CommonScoreFlags {
  std::int64_t collar_ms = 0;
  double iou_threshold = 0.5;
  std::string sl_mode = "iou";
  bool strict = false;
  bool no_lowercase = false;
  bool keep_punctuation = false;
  std::string digits = "keep";
  int jobs = 1;
  std::string format = "table";
  std::string out_path;

  void attach(CLI::App* cmd, bool with_jobs) {
    cmd->add_option("--collar", collar_ms, "No-score zone around reference boundaries, ms");
    cmd->add_option("--iou-threshold", iou_threshold, "Localization hit threshold");
    cmd->add_option("--sl-mode", sl_mode, "Localization hit criterion")
        ->check(CLI::IsMember({"iou", "center"}));
    cmd->add_flag("--strict", strict, "Strict hypothesis parsing (references always strict)");
    cmd->add_flag("--no-lowercase", no_lowercase, "Keep letter case when tokenizing");
    cmd->add_flag("--keep-punctuation", keep_punctuation, "Keep punctuation when tokenizing");
    cmd->add_option("--digits", digits, "Digit handling when tokenizing")
        ->check(CLI::IsMember({"keep", "spell"}));
    if (with_jobs) cmd->add_option("--jobs", jobs, "Worker pool size")->check(CLI::PositiveNumber);
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  }

  diascore::RunOptions options() const {
    diascore::RunOptions opts;
    opts.collar_ms = collar_ms;
    opts.iou_threshold = iou_threshold;
    opts.sl_mode = sl_mode == "center" ? diascore::SlMode::center : diascore::SlMode::iou;
    opts.strict = strict;
    opts.norm.lowercase = !no_lowercase;
    opts.norm.strip_punctuation = !keep_punctuation;
    opts.norm.digit_policy = digits == "spell"
                                 ? diascore::NormalizationConfig::DigitPolicy::spell_out
                                 : diascore::NormalizationConfig::DigitPolicy::keep;
    opts.jobs = jobs;
    return opts;
  }
};

}  // namespace

int main(int argc, char** argv) {
  using namespace diascore;

  CLI::App app{"Scoring for speaker-attributed, time-stamped transcription"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // --- score ---------------------------------------------------------------
  auto* score = app.add_subcommand("score", "Score every sample in a manifest");
  std::string manifest_path;
  score->add_option("manifest", manifest_path, "Manifest JSON path")->required();
  CommonScoreFlags score_flags;
  score_flags.attach(score, /*with_jobs=*/true);

  // --- score-pair ----------------------------------------------------------
  auto* pair = app.add_subcommand("score-pair", "Score a single reference/hypothesis pair");
  std::string pair_ref, pair_hyp, pair_task, pair_registration, pair_subset = "none";
  pair->add_option("reference", pair_ref, "Reference file")->required();
  pair->add_option("hypothesis", pair_hyp, "Hypothesis file")->required();
  pair->add_option("--task", pair_task, "Task to score")
      ->required()
      ->check(CLI::IsMember({"vrsdr", "sr", "sv", "sl", "si"}));
  pair->add_option("--registration", pair_registration, "Registration file (vrsdr)");
  pair->add_option("--subset", pair_subset, "Subset tag")
      ->check(CLI::IsMember({"easy", "hard", "none"}));
  CommonScoreFlags pair_flags;
  pair_flags.attach(pair, /*with_jobs=*/false);

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a synthetic conversation");
  SynthConfig synth_cfg;
  std::string out_ref, out_reg, out_hyp;
  std::vector<std::string> perturb_specs;
  synth->add_option("--seed", synth_cfg.seed, "Generator seed");
  synth->add_option("--speakers", synth_cfg.n_speakers, "Number of speakers");
  synth->add_option("--turns", synth_cfg.n_turns, "Number of turns");
  synth->add_option("--words-min", synth_cfg.words_per_turn.first, "Min words per turn");
  synth->add_option("--words-max", synth_cfg.words_per_turn.second, "Max words per turn");
  synth->add_option("--dur-min", synth_cfg.turn_duration_ms.first, "Min turn duration, ms");
  synth->add_option("--dur-max", synth_cfg.turn_duration_ms.second, "Max turn duration, ms");
  synth->add_option("--gap-min", synth_cfg.gap_ms.first, "Min gap between turns, ms");
  synth->add_option("--gap-max", synth_cfg.gap_ms.second, "Max gap between turns, ms");
  synth->add_option("--overlap-prob", synth_cfg.overlap_probability,
                    "Probability a turn overlaps the previous one");
  synth->add_option("--vocab", synth_cfg.vocabulary, "Vocabulary size");
  synth->add_option("--out-ref", out_ref, "Write the transcript here")->required();
  synth->add_option("--out-reg", out_reg, "Write the registration here");
  synth->add_option("--out-hyp", out_hyp, "Write a perturbed copy here");
  synth->add_option("--perturb", perturb_specs,
                    "Perturbation for --out-hyp, e.g. swap_labels:S1,S2 shift_all:500 "
                    "substitute_words:0.1:7 drop_segments:0.1:7 relabel_to_unregistered:S1");

  // --- convert ---------------------------------------------------------------
  auto* convert = app.add_subcommand("convert", "Convert between transcript and RTTM");
  std::string convert_in, convert_out, convert_to = "rttm", rttm_file_id = "file";
  int rttm_channel = 1;
  convert->add_option("input", convert_in, "Input file")->required();
  convert->add_option("output", convert_out, "Output file")->required();
  convert->add_option("--to", convert_to, "Target format")
      ->check(CLI::IsMember({"rttm", "transcript"}));
  convert->add_option("--rttm-file-id", rttm_file_id, "RTTM file id field");
  convert->add_option("--rttm-channel", rttm_channel, "RTTM channel field");

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      const RunOutcome outcome = run_manifest(manifest_path, score_flags.options());
      for (const auto& error : outcome.errors) std::cerr << "error: " << error << "\n";
      if (outcome.exit_code != 0) return outcome.exit_code;
      emit_report_text(outcome.report, score_flags.format, score_flags.out_path);
      return 0;
    }

    if (pair->parsed()) {
      ManifestEntry entry;
      entry.sample_id = "pair";
      const auto task = task_from_name(pair_task);
      entry.task = *task;
      entry.reference_path = pair_ref;
      entry.hypothesis_path = pair_hyp;
      if (entry.task == Task::vrsdr) {
        if (pair_registration.empty())
          throw ManifestError("--registration is required for vrsdr");
        entry.registration_path = pair_registration;
      }
      entry.subset = pair_subset == "easy"   ? Subset::easy
                     : pair_subset == "hard" ? Subset::hard
                                             : Subset::none;
      const SampleDetail detail = score_sample(entry, pair_flags.options());
      for (const auto& w : detail.warnings) std::cerr << "warning: " << w.message << "\n";
      emit_report_text(rebuild_from_details({detail}), pair_flags.format, pair_flags.out_path);
      return 0;
    }

    if (synth->parsed()) {
      auto [transcript, registration] = gen_conversation(synth_cfg);
      write_text_file(out_ref, emit_transcript(transcript));
      if (!out_reg.empty()) write_text_file(out_reg, emit_registration(registration));
      if (!out_hyp.empty()) {
        AttributedTranscript hyp = transcript;
        for (const auto& spec : perturb_specs) hyp = perturb(hyp, parse_perturb_spec(spec));
        write_text_file(out_hyp, emit_transcript(hyp));
      }
      return 0;
    }

    if (convert->parsed()) {
      const std::string input = read_text_file(convert_in);
      if (convert_to == "rttm") {
        const auto parsed = parse_transcript(input, ParseMode::strict);
        write_text_file(convert_out, emit_rttm(parsed.transcript, rttm_file_id, rttm_channel));
      } else {
        write_text_file(convert_out, emit_transcript(parse_rttm(input)));
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
