#include "cli.hpp"

#include "ultra/ultra.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

namespace ultra::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string out_dir = ".";
  double epsilon = default_epsilon;
  std::vector<std::string> criteria{"ward", "single"};
  std::uint64_t seed = 1;
  std::uint64_t sample = 0;
  std::size_t top_k = 2000;

  bool distances = false;
  bool coords = false;
  bool triplets = false;
  std::vector<std::string> select;
  std::string select_file;
  double r_tolerance = 1e-6;
  Index rows = 0;
  Index cols = 0;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<Linkage> parse_criteria(const std::vector<std::string>& names) {
  std::vector<Linkage> out;
  for (const auto& name : names) out.push_back(parse_linkage(name));
  if (out.empty()) throw ArgumentError("--criteria needs at least one criterion");
  return out;
}

/// Writes artifacts into the output directory, each prefixed with the run
/// provenance so reruns are byte-comparable.
class OutputDir {
 public:
  OutputDir(const RunConfig& config, std::vector<std::string> parameters, bool seeded)
      : dir_(config.out_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    header_.push_back(std::string("ultra ") + version_string);
    header_.push_back("command: " + config.subcommand);
    if (!config.input.empty()) header_.push_back("input: " + config.input);
    header_.push_back("parameters: " + join(parameters, " "));
    header_.push_back(seeded ? "seed: " + std::to_string(config.seed) : std::string("seed: none"));
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ostringstream text;
    write_comment_header(text, header_);
    body(text);
    save(name, text.str());
  }

  void write_newick(const std::string& name, const std::string& tree) {
    std::ostringstream text;
    for (const auto& line : header_) text << '[' << line << "]\n";
    text << tree << '\n';
    save(name, text.str());
  }

  [[nodiscard]] const std::vector<fs::path>& written() const noexcept { return written_; }

 private:
  void save(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write " + path.string());
    file << content;
    if (!file) throw IoError("failed writing " + path.string());
    written_.push_back(path);
  }

  fs::path dir_;
  std::vector<std::string> header_;
  std::vector<fs::path> written_;
};

TripletMode triplet_mode(const RunConfig& c) {
  if (c.sample > 0) return Sampled{c.sample, c.seed};
  return Exhaustive{};
}

std::string param(std::string_view key, const std::string& value) {
  return std::string(key) + "=" + value;
}

DissimilarityMatrix distances_from(const RunConfig& c) {
  const LabeledTable table = read_table(c.input);
  if (c.coords) return euclidean_distances(to_coordinates(table));
  return to_dissimilarity(table);
}

// --------------------------------------------------------------------------

void run_ingest(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(c.input);
  const TermDocMatrix tdm = build_term_doc(corpus, c.top_k);
  for (const auto& w : tdm.warnings) err << "warning: " << w << '\n';

  OutputDir dir(c,
                {param("top_k", std::to_string(c.top_k)),
                 "tokenizer=lowercase-ascii-letter-runs-with-internal-apostrophes"},
                false);
  dir.write("termdoc.csv", [&](std::ostream& os) { write_table(os, to_table(tdm.counts)); });
  out << "documents " << tdm.counts.rows() << ", terms " << tdm.counts.cols() << ", dropped "
      << tdm.dropped_documents.size() << '\n';
}

void run_ca(const RunConfig& c, std::ostream& out) {
  const FrequencyMatrix f = to_frequency(read_table(c.input));
  const CaResult ca = correspondence_analysis(f);

  std::vector<std::string> selection = c.select;
  if (!c.select_file.empty()) {
    std::ifstream in(c.select_file);
    if (!in) throw IoError("cannot open " + c.select_file);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() != '#') selection.push_back(line);
    }
  }

  OutputDir dir(c, {param("select", std::to_string(selection.size()) + " labels")}, false);
  dir.write("ca_rows.csv", [&](std::ostream& os) { write_table(os, to_table(ca.row_coords)); });
  dir.write("ca_columns.csv", [&](std::ostream& os) { write_table(os, to_table(ca.col_coords)); });
  dir.write("ca_singular_values.csv", [&](std::ostream& os) {
    os << "axis,singular_value,inertia\n";
    for (Index k = 0; k < ca.singular_values.size(); ++k) {
      const double s = ca.singular_values(k);
      os << "F" << k + 1 << ',' << format_number(s) << ',' << format_number(s * s) << '\n';
    }
  });
  if (!selection.empty()) {
    const CoordinateMatrix chosen = select_columns(ca, selection);
    dir.write("ca_selected.csv", [&](std::ostream& os) { write_table(os, to_table(chosen)); });
  }
  out << "factor space dimensionality " << ca.singular_values.size() << '\n';
}

void run_pcoa(const RunConfig& c, std::ostream& out) {
  const PcoaResult r = pcoa(distances_from(c));
  OutputDir dir(c, {param("eigenvalue_cutoff", "1e-10*max|lambda|")}, false);
  dir.write("pcoa_coords.csv", [&](std::ostream& os) { write_table(os, to_table(r.coordinates)); });
  dir.write("pcoa_eigenvalues.csv", [&](std::ostream& os) {
    os << "rank,eigenvalue\n";
    for (Index k = 0; k < r.spectrum.eigenvalues.size(); ++k) {
      os << k + 1 << ',' << format_number(r.spectrum.eigenvalues(k)) << '\n';
    }
  });
  dir.write("pcoa_metricity.txt", [&](std::ostream& os) {
    os << "positive_mass=" << format_number(r.metricity.positive_mass) << '\n'
       << "total_abs_mass=" << format_number(r.metricity.total_abs_mass) << '\n'
       << "metricity=" << format_number(r.metricity.coefficient) << '\n'
       << "dimensions=" << r.coordinates.dimensions() << '\n';
  });
  out << "metricity " << format_number(r.metricity.coefficient) << '\n';
}

void run_hclust(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DissimilarityMatrix d = distances_from(c);
  const std::vector<Linkage> criteria = parse_criteria(c.criteria);
  OutputDir dir(c, {param("criteria", join(c.criteria, ","))}, false);
  for (const Linkage crit : criteria) {
    const std::string name(to_string(crit));
    const Dendrogram h = linkage(d, crit);
    const auto inversions = detect_inversions(h);
    const NewickExport tree = export_newick(h);
    if (!tree.branch_lengths) {
      err << "warning: " << name << " dendrogram has " << inversions.size()
          << " inversion(s); Newick written without branch lengths\n";
    }
    dir.write(name + "_merges.csv", [&](std::ostream& os) { write_merge_table(os, h); });
    dir.write_newick(name + ".nwk", tree.text);
    dir.write(name + "_cophenetic.csv",
              [&](std::ostream& os) { write_table(os, to_table(cophenetic(h))); });
    if (!inversions.empty()) {
      dir.write(name + "_inversions.csv", [&](std::ostream& os) {
        os << "merge,drop\n";
        for (const auto& inv : inversions) os << inv.merge << ',' << format_number(inv.drop) << '\n';
      });
    }
    out << name << ": " << h.merges().size() << " merges, " << inversions.size()
        << " inversions\n";
  }
}

void run_coeffs(const RunConfig& c, std::ostream& out) {
  const LabeledTable table = read_table(c.input);
  const DissimilarityMatrix d =
      c.distances ? to_dissimilarity(table) : euclidean_distances(to_coordinates(table));
  const TripletMode mode = triplet_mode(c);
  const Labels& labels = d.labels();
  auto label = [&](Index i) -> const std::string& { return labels[static_cast<std::size_t>(i)]; };

  const UltrametricityReport alpha = alpha_epsilon(d, c.epsilon, mode);
  const double rammal = rammal_index(d);
  const double lerman = lerman_h(d, mode);
  const TrevesHartmannData th = treves_hartmann_points(d, mode);

  OutputDir dir(c,
                {param("input_kind", c.distances ? "distances" : "coordinates"),
                 param("epsilon", format_number(c.epsilon)),
                 param("sample", std::to_string(c.sample))},
                c.sample > 0);
  dir.write("coefficients.txt", [&](std::ostream& os) {
    os << "alpha_epsilon=" << format_number(alpha.alpha) << '\n'
       << "ultrametric_triplets=" << alpha.ultrametric << '\n'
       << "counted_triplets=" << alpha.counted << '\n'
       << "excluded_degenerate=" << alpha.excluded_degenerate << '\n'
       << "epsilon=" << format_number(alpha.epsilon) << '\n'
       << "mode=" << (alpha.sampled ? "sampled" : "exhaustive") << '\n'
       << "seed=" << (alpha.seed ? std::to_string(*alpha.seed) : std::string("none")) << '\n'
       << "rammal_index=" << format_number(rammal) << '\n'
       << "lerman_h=" << format_number(lerman) << '\n'
       << "lerman_h_definition=mean normalised rank gap (rank(d_max)-rank(d_med))/(P-1)\n"
       << "treves_hartmann_points=" << th.points.size() << '\n'
       << "treves_hartmann_skipped_zero=" << th.skipped_zero << '\n';
  });
  dir.write("treves_hartmann.csv", [&](std::ostream& os) {
    os << "i,j,k,dmin_over_dmax,dmed_over_dmax,dmax_minus_dmed\n";
    for (const auto& p : th.points) {
      os << csv_field(label(p.ids[0])) << ',' << csv_field(label(p.ids[1])) << ','
         << csv_field(label(p.ids[2])) << ',' << format_number(p.min_over_max) << ','
         << format_number(p.med_over_max) << ',' << format_number(p.max_minus_med) << '\n';
    }
  });
  if (c.triplets) {
    const auto verdicts = classify_triplets(d, c.epsilon, mode);
    dir.write("triplets.csv", [&](std::ostream& os) {
      os << "i,j,k,apex,base_angle_diff,ultrametric\n";
      for (const auto& v : verdicts) {
        const auto& ids = v.geometry.ids;
        os << csv_field(label(ids[0])) << ',' << csv_field(label(ids[1])) << ','
           << csv_field(label(ids[2])) << ',';
        if (v.geometry.degenerate) {
          os << ",,degenerate\n";
        } else {
          os << csv_field(label(*v.apex)) << ',' << format_number(*v.base_angle_diff) << ','
             << (v.ultrametric ? 1 : 0) << '\n';
        }
      }
    });
  }
  out << "alpha_epsilon " << format_number(alpha.alpha) << ", rammal " << format_number(rammal)
      << ", lerman_h " << format_number(lerman) << '\n';
}

void write_matched(std::ostream& os, const std::vector<MatchedTriplet>& matched,
                   const Labels& labels) {
  auto label = [&](Index i) { return csv_field(labels[static_cast<std::size_t>(i)]); };
  os << "i,j,k,base_i,base_j,apex\n";
  for (const auto& m : matched) {
    os << label(m.triplet[0]) << ',' << label(m.triplet[1]) << ',' << label(m.triplet[2]) << ','
       << label(m.base.first) << ',' << label(m.base.second) << ',' << label(m.apex) << '\n';
  }
}

void run_consensus(const RunConfig& c, std::ostream& out) {
  const DissimilarityMatrix d = distances_from(c);
  const std::vector<Linkage> criteria = parse_criteria(c.criteria);
  const ConsensusTable table = consensus_table(d, criteria);

  OutputDir dir(c,
                {param("criteria", join(c.criteria, ",")),
                 param("tie_tolerance", format_number(default_tie_tolerance)),
                 "consensus_rule=per-pair-minimum-then-subdominant-closure"},
                false);
  dir.write("consensus_table.csv", [&](std::ostream& os) {
    LabeledTable t;
    t.corner = "criteria";
    for (const Linkage l : table.criteria) t.row_labels.emplace_back(to_string(l));
    t.col_labels = t.row_labels;
    const auto m = static_cast<Index>(table.criteria.size());
    t.values.resize(m, m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        t.values(a, b) =
            static_cast<double>(table.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      }
    }
    write_table(os, t);
  });
  dir.write("consensus_summary.txt", [&](std::ostream& os) {
    os << "total_triplets=" << table.total_triplets << '\n';
    for (std::size_t a = 0; a < table.criteria.size(); ++a) {
      os << "tie_skips_" << to_string(table.criteria[a]) << '=' << table.tie_skips[a] << '\n';
    }
  });

  if (criteria.size() >= 2) {
    const UltrametricMatrix u1 = cophenetic(linkage(d, criteria[0]));
    const UltrametricMatrix u2 = cophenetic(linkage(d, criteria[1]));
    const ConsensusReport report = consensus_count(u1, u2);
    const UltrametricMatrix cons = consensus_ultrametric(u1, u2);
    const Dendrogram tree = consensus_dendrogram(cons);
    dir.write("consensus_matched.csv",
              [&](std::ostream& os) { write_matched(os, report.matched_set, d.labels()); });
    dir.write("consensus_ultrametric.csv", [&](std::ostream& os) { write_table(os, to_table(cons)); });
    dir.write("consensus_merges.csv", [&](std::ostream& os) { write_merge_table(os, tree); });
    dir.write_newick("consensus.nwk", export_newick(tree).text);
    out << to_string(criteria[0]) << " x " << to_string(criteria[1]) << ": " << report.matched
        << " of " << report.total_triplets << " triplets consistent\n";
  }
}

void run_uca(const RunConfig& c, std::ostream& out) {
  const CoordinateMatrix coords = to_coordinates(read_table(c.input));
  if (c.criteria.size() != 2) throw ArgumentError("uca needs exactly two criteria");
  const std::vector<Linkage> criteria = parse_criteria(c.criteria);
  const ComponentResult r = ultrametric_component(coords, criteria[0], criteria[1], c.epsilon);

  OutputDir dir(c,
                {param("criteria", join(c.criteria, ",")),
                 param("epsilon", format_number(c.epsilon)), "threshold_rule=diff<=epsilon"},
                false);
  dir.write("component.csv", [&](std::ostream& os) {
    os << "base1,base2,apex,angle_diff_radians\n";
    for (const auto& t : r.listing) {
      os << csv_field(t.base_first) << ',' << csv_field(t.base_second) << ','
         << csv_field(t.apex_label) << ',' << format_number(t.base_angle_diff) << '\n';
    }
  });
  dir.write("epsilon_profile.csv", [&](std::ostream& os) {
    os << "rank,diff\n";
    for (std::size_t k = 0; k < r.profile.sorted_diffs.size(); ++k) {
      os << k + 1 << ',' << format_number(r.profile.sorted_diffs[k]) << '\n';
    }
  });
  dir.write("component_summary.txt", [&](std::ostream& os) {
    os << "total_triplets=" << r.consensus.total_triplets << '\n'
       << "consensus_matched=" << r.consensus.matched << '\n'
       << "consensus_skipped_ties=" << r.consensus.skipped_ties << '\n'
       << "retained=" << r.listing.size() << '\n'
       << "degenerate=" << r.degenerate << '\n'
       << "apex_mismatch=" << r.apex_mismatch << '\n'
       << "epsilon=" << format_number(r.profile.threshold) << '\n';
  });
  out << r.listing.size() << " ultrametric-component triplets of " << r.consensus.matched
      << " consensus triplets\n";
}

void run_transform(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DissimilarityMatrix d = distances_from(c);
  const AdditiveRepair additive = cailliez_additive(d);
  const ViolationReport violations = check_metric(d, 1e-12 * d.max_value());
  std::optional<PowerRepair> power;
  std::string power_error;
  try {
    power = power_shrink(d, c.r_tolerance);
  } catch (const ValidationError& e) {
    power_error = e.what();
    err << "warning: power transform skipped: " << power_error << '\n';
  }

  OutputDir dir(c, {param("r_tolerance", format_number(c.r_tolerance))}, false);
  dir.write("cailliez.csv", [&](std::ostream& os) { write_table(os, to_table(additive.matrix)); });
  if (power) {
    dir.write("power.csv", [&](std::ostream& os) { write_table(os, to_table(power->matrix)); });
  }
  dir.write("triangle_violations.csv", [&](std::ostream& os) {
    const Labels& l = d.labels();
    os << "i,j,k,slack\n";
    for (const auto& v : violations.violations) {
      os << csv_field(l[static_cast<std::size_t>(v.i)]) << ','
         << csv_field(l[static_cast<std::size_t>(v.j)]) << ','
         << csv_field(l[static_cast<std::size_t>(v.k)]) << ',' << format_number(v.slack) << '\n';
    }
  });
  dir.write("transform.txt", [&](std::ostream& os) {
    os << "triangle_violations=" << violations.violations.size() << '\n'
       << "cailliez_constant=" << format_number(additive.constant) << '\n';
    if (power) {
      os << "power_exponent=" << format_number(power->exponent) << '\n';
    } else {
      os << "power_exponent=unavailable (" << power_error << ")\n";
    }
  });
  out << "cailliez constant " << format_number(additive.constant);
  if (power) out << ", power exponent " << format_number(power->exponent);
  out << '\n';
}

void run_mirror(const RunConfig& c, std::ostream& out) {
  const FrequencyMatrix m = random_mirror(c.rows, c.cols, c.seed);
  OutputDir dir(c,
                {param("rows", std::to_string(c.rows)), param("cols", std::to_string(c.cols)),
                 "generator=splitmix64-top53"},
                true);
  dir.write("mirror.csv", [&](std::ostream& os) { write_table(os, to_table(m)); });
  out << "mirror " << c.rows << "x" << c.cols << " seed " << c.seed << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Ultrametric structure of metric data: coefficients, hierarchies, consensus "
               "and the ultrametric component",
               "ultra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version_string));

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  };
  auto add_criteria = [&](CLI::App* sub) {
    sub->add_option("--criteria", config.criteria, "Linkage criteria, comma separated")
        ->delimiter(',')
        ->capture_default_str();
  };
  auto add_epsilon = [&](CLI::App* sub) {
    sub->add_option("--epsilon", config.epsilon, "Base-angle tolerance in radians")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* ingest = app.add_subcommand("ingest", "Corpus to document x term count matrix");
  ingest->add_option("corpus", config.input, "Directory of .txt files or ===DOC separated file")
      ->required();
  ingest->add_option("--top-k", config.top_k, "Vocabulary size")->capture_default_str();
  add_out(ingest);

  auto* ca = app.add_subcommand("ca", "Correspondence analysis of a frequency table");
  ca->add_option("table", config.input, "Frequency matrix CSV")->required();
  ca->add_option("--select", config.select, "Column labels to extract")->delimiter(',');
  ca->add_option("--select-file", config.select_file, "File with one column label per line");
  add_out(ca);

  auto* pc = app.add_subcommand("pcoa", "Principal coordinates and metricity of a distance matrix");
  pc->add_option("distances", config.input, "Distance matrix CSV")->required();
  add_out(pc);

  auto* hc = app.add_subcommand("hclust", "Agglomerative hierarchical clustering");
  hc->add_option("distances", config.input, "Distance matrix CSV")->required();
  hc->add_flag("--coords", config.coords, "Input holds coordinates; use Euclidean distances");
  add_criteria(hc);
  add_out(hc);

  auto* co = app.add_subcommand("coeffs", "Ultrametricity coefficients");
  co->add_option("input", config.input, "Coordinate (default) or distance matrix CSV")->required();
  co->add_flag("--distances", config.distances, "Input is a distance matrix");
  co->add_option("--sample", config.sample, "Sample this many triplets instead of all")
      ->capture_default_str();
  co->add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
  co->add_flag("--triplets", config.triplets, "Also write per-triplet verdicts");
  add_epsilon(co);
  add_out(co);

  auto* cs = app.add_subcommand("consensus", "Triplet consensus between hierarchies");
  cs->add_option("distances", config.input, "Distance matrix CSV")->required();
  cs->add_flag("--coords", config.coords, "Input holds coordinates; use Euclidean distances");
  add_criteria(cs);
  add_out(cs);

  auto* uca = app.add_subcommand("uca", "Ultrametric component of a coordinate set");
  uca->add_option("coords", config.input, "Coordinate matrix CSV")->required();
  add_criteria(uca);
  add_epsilon(uca);
  add_out(uca);

  auto* tr = app.add_subcommand("transform", "Metric repair: Cailliez constant and power shrink");
  tr->add_option("distances", config.input, "Dissimilarity matrix CSV")->required();
  tr->add_option("--r-tolerance", config.r_tolerance, "Bisection tolerance on the exponent")
      ->capture_default_str();
  add_out(tr);

  auto* mi = app.add_subcommand("mirror", "Uniform random benchmark matrix");
  mi->add_option("rows", config.rows, "Row count")->required();
  mi->add_option("cols", config.cols, "Column count")->required();
  mi->add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  add_out(mi);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << version_string << '\n';
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_validation;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  try {
    const std::string& s = config.subcommand;
    if (s == "ingest") run_ingest(config, out, err);
    else if (s == "ca") run_ca(config, out);
    else if (s == "pcoa") run_pcoa(config, out);
    else if (s == "hclust") run_hclust(config, out, err);
    else if (s == "coeffs") run_coeffs(config, out);
    else if (s == "consensus") run_consensus(config, out);
    else if (s == "uca") run_uca(config, out);
    else if (s == "transform") run_transform(config, out, err);
    else if (s == "mirror") run_mirror(config, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  return exit_ok;
}

}  // namespace ultra::cli
