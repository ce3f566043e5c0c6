// tapekit: batch front end. Every subcommand prints one JSON document.
// Exit status: 0 holds / ok, 1 fails, 2 usage or input error, 3 internal fault.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tapekit/io.hpp"

namespace {

using tapekit::io::Json;

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;
constexpr int kFault = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) { return Json::parse(slurp(path)); }

std::size_t default_fuel() {
  const char* env = std::getenv("TAPEKIT_DEFAULT_FUEL");
  if (env == nullptr || *env == '\0') return 1024;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError("TAPEKIT_DEFAULT_FUEL must be a positive integer");
  return static_cast<std::size_t>(v);
}

tapekit::ProductMeasure load_measure(const std::string& path) {
  return path.empty() ? tapekit::ProductMeasure::fair() : tapekit::io::measure_from_json(read_json(path));
}

struct Options {
  std::string out;
  std::string code_file;
  std::string spec_file;
  std::string tape;
  std::string measure_file;
  std::string mode;
  std::string map;
  std::string p = "2/3";
  std::size_t fuel = 0;
  std::size_t arity = 1;
  std::size_t pairs = 2;
  std::size_t k = 3;
  std::size_t t = 2;
};

void emit(const Options& o, const Json& j) {
  const std::string body = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write " + o.out);
  f << body;
}

std::size_t fuel_or_default(const Options& o) { return o.fuel != 0 ? o.fuel : default_fuel(); }

tapekit::io::JudgmentSpec load_spec(const Options& o) {
  auto spec = tapekit::io::judgment_spec_from_json(read_json(o.spec_file), default_fuel());
  if (o.fuel != 0) spec.fuel = o.fuel;
  if (!o.mode.empty()) spec.mode = tapekit::parse_mode(o.mode);
  if (!o.measure_file.empty()) spec.measure = load_measure(o.measure_file);
  if (spec.mode == tapekit::Mode::AlmostSure && !spec.measure) spec.measure = tapekit::ProductMeasure::fair();
  return spec;
}

int run_eval(const Options& o) {
  const auto c = tapekit::parse_code(slurp(o.code_file));
  emit(o, tapekit::io::to_json(tapekit::eval(c, tapekit::Tape::parse(o.tape), fuel_or_default(o))));
  return kHolds;
}

int run_trace(const Options& o) {
  const auto c = tapekit::parse_code(slurp(o.code_file));
  emit(o, tapekit::io::to_json(tapekit::trace(c, tapekit::TapeSpace(o.arity), fuel_or_default(o))));
  return kHolds;
}

int run_law(const Options& o) {
  const auto c = tapekit::parse_code(slurp(o.code_file));
  const auto tree = tapekit::trace(c, tapekit::TapeSpace(o.arity), fuel_or_default(o));
  emit(o, tapekit::io::to_json(tapekit::law(tree, load_measure(o.measure_file))));
  return kHolds;
}

int run_entail(const Options& o) {
  const auto j = tapekit::io::check(load_spec(o));
  emit(o, tapekit::io::to_json(j));
  return j.holds ? kHolds : kFails;
}

int run_transport(const Options& o) {
  const auto j = tapekit::io::check(load_spec(o));
  if (!j.holds) {
    emit(o, tapekit::io::to_json(j));
    return kFails;
  }
  emit(o, tapekit::io::to_json(tapekit::transport_entailment(j, tapekit::TapeMapSpec::from_name(o.map))));
  return kHolds;
}

int run_extract(const Options& o) {
  const auto spec = load_spec(o);
  const auto j = tapekit::io::check(spec);
  const auto m = spec.measure.value_or(tapekit::ProductMeasure::fair());
  const auto r = tapekit::extraction_soundness(j, m);
  emit(o, tapekit::io::to_json(r));
  return r.judgment_holds && r.sound ? kHolds : kFails;
}

int run_vn(const Options& o) {
  const auto r = tapekit::vn_fairness_report(o.pairs, load_measure(o.measure_file));
  emit(o, tapekit::io::to_json(r));
  return r.ok() ? kHolds : kFails;
}

int run_majority(const Options& o) {
  const auto f = tapekit::build_majority(o.k, o.t, tapekit::default_base_verifier(), {tapekit::Code::bit(true)},
                                         fuel_or_default(o));
  const auto r = tapekit::majority_report(f, tapekit::parse_rational(o.p));
  emit(o, tapekit::io::to_json(r));
  return r.ok() ? kHolds : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checker for random-tape programs: evaluation, traces, laws, entailment and transport"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out, "Write the JSON result to this path instead of stdout");

  auto add_fuel = [&o](CLI::App* c) {
    c->add_option("--fuel", o.fuel, "Reduction step budget (default: $TAPEKIT_DEFAULT_FUEL or 1024)")
        ->check(CLI::PositiveNumber);
  };

  auto* eval = app.add_subcommand("eval", "Evaluate a code on one tape");
  eval->add_option("code", o.code_file, "S-expression file ('-' for stdin)")->required();
  eval->add_option("--tape", o.tape, "Tape literal, e.g. 01:0 or 1:(10)*|:1")->required();
  add_fuel(eval);

  auto* trace = app.add_subcommand("trace", "Print the decision tree of a code over all tapes");
  trace->add_option("code", o.code_file, "S-expression file ('-' for stdin)")->required();
  trace->add_option("--arity", o.arity, "Number of tape components")->check(CLI::PositiveNumber);
  add_fuel(trace);

  auto* law = app.add_subcommand("law", "Exact outcome distribution of a code");
  law->add_option("code", o.code_file, "S-expression file ('-' for stdin)")->required();
  law->add_option("--arity", o.arity, "Number of tape components")->check(CLI::PositiveNumber);
  law->add_option("--measure", o.measure_file, "Measure JSON (default: fair coin)");
  add_fuel(law);

  auto add_spec = [&](CLI::App* c) {
    c->add_option("judgment", o.spec_file, "Judgment spec JSON")->required();
    c->add_option("--mode", o.mode, "Override the spec's mode")->check(CLI::IsMember({"pointwise", "as"}));
    c->add_option("--measure", o.measure_file, "Override the spec's measure");
    add_fuel(c);
  };
  auto* entail = app.add_subcommand("entail", "Check an entailment judgment");
  add_spec(entail);
  auto* transport = app.add_subcommand("transport", "Transport a holding judgment along a tape map");
  add_spec(transport);
  transport->add_option("--map", o.map, "identity, flip, drop:<k>, split:<k>, block:<b>, proj:<a>:<c>")->required();
  auto* extract = app.add_subcommand("extract", "Compare expectations of both sides of a judgment");
  add_spec(extract);

  auto* casebook = app.add_subcommand("casebook", "Worked fixtures");
  casebook->require_subcommand(1);
  auto* vn = casebook->add_subcommand("vn", "Von Neumann unbiasing fairness report");
  vn->add_option("--pairs", o.pairs, "Pairs decided before fuel runs out")->check(CLI::Range(1, 16));
  vn->add_option("--measure", o.measure_file, "Measure JSON (default: fair coin)");
  auto* majority = casebook->add_subcommand("majority", "Majority amplification report");
  majority->add_option("--p", o.p, "Bias of every tape bit, e.g. 2/3");
  majority->add_option("--k", o.k, "Repetitions")->check(CLI::Range(1, 10));
  majority->add_option("--t", o.t, "Acceptance threshold")->check(CLI::Range(1, 10));
  add_fuel(majority);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*eval) return run_eval(o);
    if (*trace) return run_trace(o);
    if (*law) return run_law(o);
    if (*entail) return run_entail(o);
    if (*transport) return run_transport(o);
    if (*extract) return run_extract(o);
    if (*vn) return run_vn(o);
    if (*majority) return run_majority(o);
  } catch (const tapekit::ImplementationFault& e) {
    std::cerr << "internal fault: " << e.what() << "\n";
    return kFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
