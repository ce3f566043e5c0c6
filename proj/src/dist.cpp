#include "tapekit/dist.hpp"

#include "tapekit/extraction.hpp"

namespace tapekit {

std::string label_text(const Label& l) { return l ? *l : "bottom"; }

FinDist::FinDist(std::map<Label, Rational> masses) {
  Rational total = 0;
  for (auto& [x, p] : masses) {
    if (p < 0) throw std::invalid_argument("negative mass at " + label_text(x));
    total += p;
    if (p > 0) masses_.emplace(x, std::move(p));
  }
  if (total != 1) throw std::invalid_argument("masses sum to " + tapekit::to_string(total) + ", not 1");
}

FinDist FinDist::dirac(const Label& x) { return FinDist({{x, Rational(1)}}); }

Rational FinDist::mass(const Label& x) const {
  auto it = masses_.find(x);
  return it == masses_.end() ? Rational(0) : it->second;
}

std::set<Label> FinDist::support() const {
  std::set<Label> out;
  for (const auto& kv : masses_) out.insert(kv.first);
  return out;
}

std::string FinDist::to_string() const {
  std::string out = "{";
  for (const auto& [x, p] : masses_) {
    if (out.size() > 1) out += ", ";
    out += label_text(x) + ": " + tapekit::to_string(p);
  }
  return out + "}";
}

FinDist dist_bind(const FinDist& d, const std::function<FinDist(const std::string&)>& f) {
  std::map<Label, Rational> out;
  for (const auto& [x, p] : d.masses()) {
    if (!x) {
      out[std::nullopt] += p;
      continue;
    }
    const FinDist next = f(*x);
    for (const auto& [y, q] : next.masses()) out[y] += p * q;
  }
  return FinDist(std::move(out));
}

bool must(const FinDist& d, const std::set<std::string>& accept) {
  for (const auto& [x, p] : d.masses()) {
    if (!x || !accept.count(*x)) return false;
  }
  return true;
}

MustJudgment must_entail(const std::set<Code>& phi, const Code& e, const std::set<std::string>& accept,
                         const std::vector<Code>& universe, std::size_t arity, std::size_t fuel,
                         const ProductMeasure& m) {
  if (universe.empty()) throw std::invalid_argument("entailment needs a nonempty code universe");
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");
  MustJudgment j;
  const TapeSpace space(arity);
  for (const auto& c : universe) {
    if (!phi.count(c)) continue;
    FinDist d = law(mca_apply(e, c, space, fuel), m);
    for (const auto& [x, p] : d.masses()) {
      if (!x || !accept.count(*x)) {
        j.holds = false;
        j.failing_code = c;
        j.offending = x;
        j.failing_law = d;
        return j;
      }
    }
  }
  return j;
}

FinDist random_dist(gen::Engine& g, const std::vector<Label>& labels) {
  static const long dens[] = {1, 2, 3, 4, 6, 8};
  const long den = dens[gen::below(g, 6)];
  std::map<Label, Rational> out;
  long left = den;
  for (std::size_t i = 0; i < labels.size() && left > 0; ++i) {
    const long take = i + 1 == labels.size() ? left : static_cast<long>(gen::below(g, static_cast<std::size_t>(left) + 1));
    if (take > 0) out[labels[i]] += rational(take, den);
    left -= take;
  }
  if (left > 0) out[labels.front()] += rational(left, den);
  return FinDist(std::move(out));
}

namespace {

void tally(AxiomTally& t, bool ok, const std::string& what) {
  ++t.checked;
  if (!ok) {
    if (t.failed == 0) t.first_failure = what;
    ++t.failed;
  }
}

}  // namespace

MustAxiomReport check_must_modality_axioms(const gen::Settings& settings) {
  MustAxiomReport report;
  gen::Engine g(settings.seed);
  const std::vector<std::string> names{"H", "T", "U", "V"};
  std::vector<Label> labels{std::nullopt};
  for (const auto& n : names) labels.emplace_back(n);
  auto random_accept = [&] {
    std::set<std::string> p;
    for (const auto& n : names) {
      if (gen::coin(g)) p.insert(n);
    }
    return p;
  };
  for (std::size_t i = 0; i < settings.instances; ++i) {
    const std::string tag = "instance " + std::to_string(i);
    // Shuffle so random_dist does not always favour the first labels.
    std::vector<Label> order = labels;
    for (std::size_t j = order.size(); j > 1; --j) std::swap(order[j - 1], order[gen::below(g, j)]);
    FinDist d = random_dist(g, order);
    std::set<std::string> p = random_accept();

    const std::string& x = names[gen::below(g, names.size())];
    tally(report.after_return, must(FinDist::dirac(x), p) == (p.count(x) == 1), tag);

    std::map<std::string, FinDist> f;
    for (const auto& n : names) {
      std::vector<Label> sub;
      for (const auto& l : labels) {
        if (gen::below(g, 3) == 0) sub.push_back(l);
      }
      if (sub.empty()) sub.emplace_back(n);
      f.emplace(n, random_dist(g, sub));
    }
    bool pointwise = true;
    for (const auto& z : d.support()) pointwise = pointwise && z && must(f.at(*z), p);
    tally(report.after_bind, must(dist_bind(d, [&f](const std::string& z) { return f.at(z); }), p) == pointwise,
          tag);

    std::set<std::string> q = p;
    q.insert(names[gen::below(g, names.size())]);
    tally(report.monotonicity, !must(d, p) || must(d, q), tag);
  }
  return report;
}

}  // namespace tapekit
