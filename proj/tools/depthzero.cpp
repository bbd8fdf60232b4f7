// Command-line front end: dossier, specialize, fan.
//
// Exit codes: 0 success, 2 parse error, 3 budget exceeded, 4 a named check
// failed (invariant violation, failing ledger entry, or oracle disagreement).

#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "depthzero/dossier.hpp"
#include "depthzero/errors.hpp"
#include "depthzero/lt_specialize.hpp"
#include "depthzero/toroidal_fan.hpp"
#include "depthzero/vector_file.hpp"

using namespace depthzero;

namespace {

constexpr int kParse = 2, kBudget = 3, kCheck = 4;
constexpr std::size_t kFanBound = 5;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path);
  out << text;
}

std::string dump(const Json& doc, bool pretty) { return doc.dump(pretty ? 2 : -1) + "\n"; }

Json field_row(const FieldPtr& F, const std::vector<Fq>& v) {
  Json out = Json::array();
  for (const Fq x : v) out.push_back(F->to_string(x));
  return out;
}

Json matrix_rows(const FqMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(field_row(m.field(), m.row(i)));
  return out;
}

struct SpecializeOutcome {
  Json record;
  bool agree = false;
  bool precision = false;
};

SpecializeOutcome specialize_record(const VectorRecord& rec) {
  SpecializeOutcome out;
  out.record["name"] = rec.name;
  out.record["n"] = rec.vector.n();
  try {
    const auto nl = normalize_breaks(rec.vector);
    const auto bd = breaks(nl.vector);
    const auto flag = flag_from_breaks(bd);
    const auto oracle = wedge_oracle(nl.vector);
    out.agree = flag == oracle;
    out.record["already_normalized"] = nl.transform.is_identity();
    out.record["transform"] = matrix_rows(nl.transform);
    out.record["breaks"] = bd.breaks;
    out.record["stratum"] = bd.lengths;
    Json res = Json::array();
    for (const auto& p : bd.residues) res.push_back(field_row(bd.field, p));
    out.record["residues"] = res;
    Json fl = Json::array();
    for (const auto& m : flag.flag) fl.push_back(matrix_rows(m));
    out.record["flag"] = fl;
    out.record["oracle_agrees"] = out.agree;
  } catch (const PrecisionError& e) {
    out.precision = true;
    out.record["precision_error"] = e.what();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-zero local Shimura invariants"};
  app.require_subcommand(1);

  std::string spec_path, out_path, vectors_path, emit_path;
  unsigned count_max_m = 0;
  std::uint64_t budget = 10000000, seed = 0;
  bool pretty = false;

  auto* dossier = app.add_subcommand("dossier", "invariants and verification ledger of a group spec");
  dossier->add_option("--spec", spec_path, "group spec (JSON)")->required();
  dossier->add_option("--count-max-m", count_max_m, "count Y(w) points over F_{q^m} for m <= K");
  dossier->add_option("--budget", budget, "enumeration budget");
  dossier->add_option("--seed", seed, "seed for sampled checks");
  dossier->add_flag("--pretty", pretty, "indent and append a human report");
  dossier->add_option("--out", out_path, "output file");

  std::size_t random_count = 0, n = 2, m = 0;
  std::uint64_t p = 2;
  auto* spec = app.add_subcommand("specialize", "specialization strata of level vectors");
  auto* vec_opt = spec->add_option("--vectors", vectors_path, "vector file (JSON lines)");
  auto* rnd_opt = spec->add_option("--random", random_count, "generate this many normalized vectors instead");
  vec_opt->excludes(rnd_opt);
  spec->add_option("--n", n, "rank for --random")->check(CLI::Range(1, 6));
  spec->add_option("--p", p, "prime for --random");
  spec->add_option("--m", m, "field degree for --random (default n)");
  spec->add_option("--seed", seed, "seed for --random");
  spec->add_option("--emit-vectors", emit_path, "write the generated vectors here");
  spec->add_flag("--pretty", pretty, "indent output");
  spec->add_option("--out", out_path, "output file");

  std::size_t fan_n = 2;
  bool no_weyl = false, text = false;
  auto* fan = app.add_subcommand("fan", "KGL_n fan export");
  fan->add_option("--n", fan_n, "rank")->required();
  fan->add_flag("--dominant-only", no_weyl, "only sigma_0..sigma_n");
  fan->add_flag("--text", text, "plain text export");
  fan->add_flag("--pretty", pretty, "indent output");
  fan->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    if (*dossier) {
      const auto gs = load_group_spec(spec_path);
      DossierOptions opts;
      opts.count_max_m = count_max_m;
      opts.budget = budget;
      opts.seed = seed;
      auto d = build_dossier(gs, opts);
      if (pretty) {
        const auto report = render_report(d.doc);
        Json lines = Json::array();
        std::istringstream is(report);
        for (std::string line; std::getline(is, line);) lines.push_back(line);
        d.doc["report"] = lines;
      }
      emit(dump(d.doc, pretty), out_path);
      if (!d.all_pass()) {
        for (const auto& c : d.ledger)
          if (!c.pass) std::cerr << "check failed: " << c.name << '\n';
        return kCheck;
      }
      return 0;
    }

    if (*spec) {
      std::vector<VectorRecord> records;
      if (!vectors_path.empty()) {
        records = load_vector_file(vectors_path);
      } else if (random_count > 0) {
        const auto F = FiniteField::make(p, 1, static_cast<unsigned>(m ? m : n));
        std::mt19937_64 rng(seed);
        for (std::size_t k = 0; k < random_count; ++k) {
          const auto saved = rng;
          auto v = random_normalized_level_vector(F, n, rng);
          try {
            wedge_oracle(v);
          } catch (const PrecisionError&) {
            // one retry at doubled precision from the same state
            rng = saved;
            v = random_normalized_level_vector(F, n, rng, 2);
          }
          records.push_back({"random" + std::to_string(k), v});
        }
        if (!emit_path.empty()) {
          std::ofstream out(emit_path);
          for (const auto& r : records) out << vector_record_line(r) << '\n';
        }
      } else {
        throw ParseError("specialize needs --vectors or --random");
      }
      Json doc;
      Json recs = Json::array();
      std::size_t agree = 0, disagree = 0, precision = 0;
      for (const auto& r : records) {
        auto o = specialize_record(r);
        if (o.precision)
          ++precision;
        else if (o.agree)
          ++agree;
        else
          ++disagree;
        recs.push_back(o.record);
      }
      doc["records"] = recs;
      doc["summary"] = {{"records", records.size()},
                        {"agreements", agree},
                        {"disagreements", disagree},
                        {"precision_errors", precision}};
      emit(dump(doc, pretty), out_path);
      return disagree ? kCheck : 0;
    }

    if (*fan) {
      if (fan_n > kFanBound) throw SizeError("fan export is limited to n <= " + std::to_string(kFanBound));
      const auto f = kgl_fan(fan_n, !no_weyl);
      if (text) {
        emit(fan_to_text(f), out_path);
        return 0;
      }
      Json doc;
      doc["n"] = f.n;
      doc["weyl_closure"] = f.weyl_closure;
      Json cones = Json::array();
      bool dd = true;
      for (const auto& c : f.cones) {
        cones.push_back({{"label", c.label}, {"perm", c.perm}, {"generators", c.generators}, {"inequalities", c.inequalities}});
        dd = dd && double_description_consistent(c);
      }
      doc["cones"] = cones;
      const bool stable = weyl_stable(f);
      doc["checks"] = {{"weyl_stable", stable}, {"double_description", dd}};
      if (fan_n <= 4) doc["checks"]["faces_consistent"] = faces_consistent(f);
      emit(dump(doc, pretty), out_path);
      const bool ok = dd && (!f.weyl_closure || stable) &&
                      (!doc["checks"].contains("faces_consistent") || doc["checks"]["faces_consistent"].get<bool>());
      return ok ? 0 : kCheck;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const SizeError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const InvariantViolation& e) {
    std::cerr << "check failed: " << e.check() << ": " << e.what() << '\n';
    return kCheck;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
