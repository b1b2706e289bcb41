#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "lexforge/error.hpp"
#include "lexforge/pipeline.hpp"

namespace lexforge {

void write_report_json(std::ostream& out, const RunReport& r) {
  nlohmann::ordered_json j;
  j["source_tokens"] = r.source_tokens;
  j["target_tokens"] = r.target_tokens;
  j["source_nouns"] = r.source_nouns;
  j["target_types"] = r.target_types;
  j["prefilter"] = {{"considered", r.prefilter.considered},
                    {"after_frequency", r.prefilter.after_frequency},
                    {"after_euclid", r.prefilter.after_euclid}};
  j["primary_entries"] = r.primary_entries;
  j["path_points"] = r.path_points;
  j["anchor_points"] = r.anchor_points;
  j["segments"] = r.segments;
  j["noise_segments"] = r.noise_segments;
  j["secondary_candidates"] = r.secondary_candidates;
  j["secondary_entries"] = r.secondary_entries;
  j["total_entries"] = r.primary_entries + r.secondary_entries;
  j["warnings"] = r.warnings;
  out << j.dump(2) << '\n';
}

void write_timings_json(std::ostream& out, const RunTimings& timings) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [stage, seconds] : timings) j[stage] = seconds;
  out << j.dump(2) << '\n';
}

void write_segmentation_tsv(std::ostream& out, const Segmentation& seg) {
  fmt::print(out, "segment\tsource_begin\tsource_end\ttarget_begin\ttarget_end\tnoise\n");
  for (std::size_t k = 0; k < seg.segment_count(); ++k) {
    const auto s = seg.source_span(k), t = seg.target_span(k);
    fmt::print(out, "{}\t{}\t{}\t{}\t{}\t{}\n", k, s.begin, s.end, t.begin, t.end, seg.is_noise(k) ? 1 : 0);
  }
}

Segmentation read_segmentation_tsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<Offset> source_ends, target_ends;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::istringstream fields(line);
    std::size_t k = 0, sb = 0, se = 0, tb = 0, te = 0, noise = 0;
    if (!(fields >> k >> sb >> se >> tb >> te >> noise) || k != source_ends.size() || se == 0 || te == 0)
      throw ParseError(fmt::format("segmentation line {} is malformed", line_no), line_no);
    source_ends.push_back(se);
    target_ends.push_back(te);
  }
  if (source_ends.empty()) throw ParseError("segmentation file holds no segments", line_no);
  // Segment k ends just past cut k; the last segment ends at the text length.
  std::vector<Offset> source_cuts, target_cuts;
  for (std::size_t k = 0; k + 1 < source_ends.size(); ++k) {
    source_cuts.push_back(source_ends[k] - 1);
    target_cuts.push_back(target_ends[k] - 1);
  }
  return Segmentation(std::move(source_cuts), std::move(target_cuts), source_ends.back(),
                      target_ends.back());
}

void write_anchor_svg(std::ostream& out, const AnchorStage& anchoring, std::size_t source_len,
                      std::size_t target_len) {
  constexpr double kSize = 600.0, kMargin = 40.0;
  const double sx = kSize / static_cast<double>(std::max<std::size_t>(source_len, 1));
  const double sy = kSize / static_cast<double>(std::max<std::size_t>(target_len, 1));
  fmt::print(out,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
             "viewBox=\"0 0 {0} {0}\">\n",
             kSize + 2 * kMargin);
  fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(out,
             "<g transform=\"translate({0},{1}) scale(1,-1)\">\n"
             "<rect x=\"0\" y=\"0\" width=\"{2}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n",
             kMargin, kMargin + kSize, kSize);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < anchoring.points.size(); ++k) {
      const bool kept = anchoring.kept[k];
      if (kept != (pass == 1)) continue;
      const auto& p = anchoring.points[k];
      fmt::print(out, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\"/>\n",
                 static_cast<double>(p.i) * sx, static_cast<double>(p.j) * sy, kept ? 1.5 : 1.0,
                 kept ? "#c0392b" : "#bbbbbb");
    }
  }
  fmt::print(out, "</g>\n");
  fmt::print(out,
             "<text x=\"{0}\" y=\"{1}\" font-size=\"12\" font-family=\"sans-serif\">source offset "
             "(kept {2} of {3} points)</text>\n",
             kMargin, kMargin + kSize + 25, anchoring.anchors.count(), anchoring.points.size());
  fmt::print(out,
             "<text x=\"12\" y=\"{0}\" font-size=\"12\" font-family=\"sans-serif\" "
             "transform=\"rotate(-90 12 {0})\">target offset</text>\n",
             kMargin + kSize / 2);
  fmt::print(out, "</svg>\n");
}

namespace {

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  fn(out);
  out.flush();
  if (!out) throw IoError(fmt::format("error while writing '{}'", path.string()));
}

}  // namespace

void emit_outputs(const PipelineRun& run, const std::filesystem::path& out_dir, const DumpOptions& dumps) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

  write_file(out_dir / "lexicon.tsv", [&](std::ostream& o) { write_lexicon_tsv(o, run.lexicon); });
  write_file(out_dir / "report.json", [&](std::ostream& o) { write_report_json(o, run.report); });
  write_file(out_dir / "timings.json", [&](std::ostream& o) { write_timings_json(o, run.timings); });

  if (dumps.signals) {
    write_file(out_dir / "signals.csv", [&](std::ostream& o) {
      fmt::print(o, "side,word,index,gap\n");
      auto dump = [&](std::string_view side, const DiffMap& signals) {
        for (const auto& [key, v] : signals)
          for (std::size_t k = 0; k < v.values.size(); ++k)
            fmt::print(o, "{},{},{},{}\n", side, v.word, k + 1, v.values[k]);
      };
      dump("source", run.primary.source_signals);
      dump("target", run.primary.target_signals);
    });
  }

  if (dumps.paths) {
    std::map<std::pair<std::string_view, std::string_view>, const ScoredPair*> index;
    for (const auto& sp : run.primary.scored) index.emplace(std::pair{std::string_view(sp.source_word), std::string_view(sp.target_word)}, &sp);
    std::vector<const ScoredPair*> lexicon_pairs;
    for (const auto& e : run.primary.lexicon)
      for (const auto& c : e.candidates) lexicon_pairs.push_back(index.at({e.source_word, c.target_word}));
    write_file(out_dir / "dtw_pairs.csv", [&](std::ostream& o) {
      fmt::print(o, "pair_id,source_word,target_word,raw_cost,normalized_cost,path_length\n");
      for (std::size_t id = 0; id < lexicon_pairs.size(); ++id) {
        const auto& sp = *lexicon_pairs[id];
        fmt::print(o, "{},{},{},{:.0f},{:.6f},{}\n", id, sp.source_word, sp.target_word,
                   sp.result.raw_cost, sp.result.normalized_cost, sp.result.path.size());
      }
    });
    write_file(out_dir / "dtw_paths.csv", [&](std::ostream& o) {
      fmt::print(o, "pair_id,step,i,j\n");
      for (std::size_t id = 0; id < lexicon_pairs.size(); ++id) {
        const auto& path = lexicon_pairs[id]->result.path;
        for (std::size_t s = 0; s < path.size(); ++s) fmt::print(o, "{},{},{},{}\n", id, s, path[s].i, path[s].j);
      }
    });
  }

  if (dumps.anchors) {
    const auto& a = run.anchoring;
    write_file(out_dir / "anchors.csv", [&](std::ostream& o) {
      fmt::print(o, "i,j,kept\n");
      for (std::size_t k = 0; k < a.points.size(); ++k)
        fmt::print(o, "{},{},{}\n", a.points[k].i, a.points[k].j, a.kept[k] ? 1 : 0);
    });
    write_file(out_dir / "segments.tsv", [&](std::ostream& o) { write_segmentation_tsv(o, a.segmentation); });
    write_file(out_dir / "anchors.svg", [&](std::ostream& o) {
      write_anchor_svg(o, a, run.report.source_tokens, run.report.target_tokens);
    });
  }

  if (dumps.segsets) {
    write_file(out_dir / "segsets.tsv", [&](std::ostream& o) {
      fmt::print(o, "side\tword\tsegments\n");
      auto dump = [&](std::string_view side, const BinaryMap& vectors) {
        for (const auto& [key, v] : vectors) fmt::print(o, "{}\t{}\t{}\n", side, v.word(), fmt::join(v.set_bits(), ","));
      };
      dump("source", run.secondary.source_vectors);
      dump("target", run.secondary.target_vectors);
    });
  }
}

}  // namespace lexforge
