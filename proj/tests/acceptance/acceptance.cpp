// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
// if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fractlang/fractal.hpp"
#include "fractlang/geometry.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/measure.hpp"
#include "fractlang/parser.hpp"
#include "fractlang/proof.hpp"
#include "fractlang/render.hpp"
#include "fractlang/rewrite.hpp"
#include "fractlang/trace_equiv.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace fl = fractlang;
namespace ft = fractlang::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FRACTLANG_TEST_DATA;
const std::string kCli = FRACTLANG_CLI;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records a failed check without stopping the criterion.
struct Checker {
  Outcome out;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (out.pass) out.detail = what;
    out.pass = false;
  }
};

struct Run {
  int status;
  std::string output;
};

Run run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

fl::Word repeat(fl::Word head, const std::string& a, std::size_t n) {
  head.insert(head.end(), n, a);
  return head;
}

Outcome stream_evaluation() {
  Checker c;
  const auto interp = fl::parse_interpretation(slurp(kData / "triangle.interp"));
  struct Case {
    fl::Word word;
    double x, y;
  };
  const std::vector<Case> cases{{repeat({"b"}, "a", 40), 0.25, 0.4330127018922193},
                                {repeat({"c", "a", "b"}, "c", 40), 0.75, 0.21650635094610965}};
  std::ostringstream detail;
  for (const auto& k : cases) {
    const auto start = Clock::now();
    const fl::Point p = fl::eval_stream(interp, k.word, {0, 0, 0});
    const double ms = seconds_since(start) * 1e3;
    c.require(std::abs(p[0] - k.x) <= 1e-9 && std::abs(p[1] - k.y) <= 1e-9,
              "stream " + fl::to_string(fl::Word(k.word.begin(), k.word.begin() + 4)) + "... landed off target");
    c.require(ms < 1.0, "evaluation took " + std::to_string(ms) + " ms");
    detail << "(" << p[0] << ", " << p[1] << ") in " << ms << " ms; ";
  }
  if (c.out.pass) c.out.detail = detail.str();
  return c.out;
}

Outcome two_loops_equivalence() {
  Checker c;
  const auto start = Clock::now();
  const Run eq = run_cli("equiv " + quote(kData / "two_loops_e1.term") + " " + quote(kData / "two_loops_e2.term"));
  const Run pf = run_cli("check-proof " + quote(kData / "proofs" / "two_loops.proof"));
  const double ms = seconds_since(start) * 1e3;
  c.require(eq.status == 0, "equiv exited " + std::to_string(eq.status) + ": " + eq.output);
  c.require(pf.status == 0 && pf.output.rfind("accepted", 0) == 0,
            "check-proof exited " + std::to_string(pf.status) + ": " + pf.output);
  c.require(ms < 100.0, "took " + std::to_string(ms) + " ms");
  // The axiom steps, without equational glue, are FP, FP, DS, UA.
  const auto d = fl::parse_derivation(slurp(kData / "proofs" / "two_loops.proof"), fl::ProofSystem::kClassic);
  std::vector<fl::Rule> axioms;
  for (const auto& s : d.steps) {
    if (s.rule != fl::Rule::kRefl && s.rule != fl::Rule::kSym && s.rule != fl::Rule::kTrans &&
        s.rule != fl::Rule::kCong) {
      axioms.push_back(s.rule);
    }
  }
  c.require(axioms == std::vector<fl::Rule>{fl::Rule::kFP, fl::Rule::kFP, fl::Rule::kDS, fl::Rule::kUA},
            "bundled derivation does not use FP, FP, DS, UA");
  if (c.out.pass) c.out.detail = "equiv exit 0, proof " + pf.output.substr(0, pf.output.find('\n')) +
                                 ", " + std::to_string(ms) + " ms";
  return c.out;
}

Outcome gasket_reproduction() {
  Checker c;
  const auto start = Clock::now();
  const fl::Lts l = fl::unfold(fl::parse_term(slurp(kData / "gasket.term")));
  const auto interp = fl::parse_interpretation(slurp(kData / "triangle.interp"));
  const fl::Point centroid{0.5, std::sqrt(3.0) / 6, 0};
  const auto sv = fl::solve(l, interp, 10, centroid);
  const fl::CompactApprox oracle{2, ft::gasket_vertices(10), 0};
  const double d = fl::hausdorff(sv[0], oracle);
  const double secs = seconds_since(start);
  const double bound = std::ldexp(1.0, -10) * std::sqrt(3.0) + 1e-9;
  c.require(d <= bound, "distance " + std::to_string(d) + " exceeds " + std::to_string(bound));
  c.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  if (c.out.pass) {
    std::ostringstream s;
    s << sv[0].points.size() << " points, distance " << d << " <= " << bound << ", " << secs << " s";
    c.out.detail = s.str();
  }
  return c.out;
}

Outcome interval_fixture_and_pixels() {
  Checker c;
  const fl::Lts loops = fl::lts_from_text(slurp(kData / "loops.lts"));
  const auto halves = fl::parse_interpretation(slurp(kData / "interval.interp"));
  const auto sv = fl::solve(loops, halves, 20, {0, 0, 0});
  fl::CompactApprox target{1, {{0, 0, 0}}, 0};
  for (int k = 0; k <= 20; ++k) target.points.push_back({std::ldexp(1.0, -k), 0, 0});
  const double d = fl::hausdorff(sv[0], target);
  c.require(d <= std::ldexp(1.0, -19), "interval distance " + std::to_string(d));

  const auto tri = fl::parse_interpretation(slurp(kData / "triangle.interp"));
  const fl::RenderConfig cfg{512, 512, fl::BBox{0, 0, 1, 1}};
  const fl::Point probe{0.75, std::sqrt(3.0) / 8, 0};
  const fl::Pixel px = fl::pixel_of(probe, 2, *cfg.bbox, cfg.width, cfg.height);
  auto painted = [&](const std::string& term_file) {
    const fl::Lts l = fl::unfold(fl::parse_term(slurp(kData / term_file)));
    const std::string img = fl::render_set(fl::solve(l, tri, 10, {1, 0, 0})[0], cfg);
    const std::size_t header = img.size() - cfg.width * cfg.height * 3;
    const std::size_t at = header + (px.row * cfg.width + px.column) * 3;
    return img[at] == '\xff' && img[at + 1] == '\0' && img[at + 2] == '\0';
  };
  const bool plain = painted("gasket.term");
  const bool twisted = painted("twisted.term");
  c.require(plain, "plain gasket leaves the probe pixel blank");
  c.require(!twisted, "twisted gasket paints the probe pixel");
  if (c.out.pass) {
    std::ostringstream s;
    s << "interval distance " << d << "; pixel (" << px.column << "," << px.row
      << ") red for the plain gasket, white for the twisted one";
    c.out.detail = s.str();
  }
  return c.out;
}

Outcome contraction_rate() {
  Checker c;
  ft::Rng rng(5005);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const fl::Lts l = ft::random_lts(rng, ft::uniform(rng, 1, 6), ft::uniform(rng, 1, 4));
    const int dim = static_cast<int>(ft::uniform(rng, 1, 3));
    const auto interp = ft::random_interpretation(rng, dim, l.alphabet(), 0.3, 0.9);
    const double coeff = interp.max_coeff(l.alphabet());
    fl::Point p0{};
    for (int i = 0; i < dim; ++i) p0[i] = ft::uniform_real(rng, -2, 2);
    fl::SolutionVector prev(l.size(), fl::CompactApprox{dim, {p0}, 0});
    fl::SolutionVector cur = fl::apply_system(l, interp, prev);
    double last = fl::product_hausdorff(cur, prev);
    for (int n = 1; n <= 10; ++n) {
      fl::SolutionVector next = fl::apply_system(l, interp, cur);
      const double d = fl::product_hausdorff(next, cur);
      if (last > 0) {
        worst = std::max(worst, d / last / coeff);
        c.require(d <= (coeff + 1e-6) * last, "trial " + std::to_string(trial) + " step " + std::to_string(n) +
                                                  ": ratio " + std::to_string(d / last) + " > " +
                                                  std::to_string(coeff));
      } else {
        c.require(d == 0, "trial " + std::to_string(trial) + ": distance grew from zero");
      }
      last = d;
      prev = std::move(cur);
      cur = std::move(next);
    }
  }
  if (c.out.pass) c.out.detail = "100 systems, largest ratio / coeff = " + std::to_string(worst);
  return c.out;
}

Outcome classic_soundness() {
  Checker c;
  ft::Rng rng(6006);
  const auto start = Clock::now();
  std::size_t applied = 0;
  for (int i = 0; i < 500; ++i) {
    const fl::Expr e = ft::random_term(rng, ft::uniform(rng, 1, 30), ft::uniform(rng, 1, 4), false);
    const auto chain = fl::rewrite_chain(e, fl::Flavor::kClassic, rng(), ft::uniform(rng, 1, 20));
    applied += chain.steps.size();
    const fl::Lts a = fl::unfold(fl::Term(chain.origin));
    const fl::Lts b = fl::unfold(fl::Term(chain.result));
    const auto r = fl::trace_equiv(a, a.root(), b, b.root());
    c.require(r.equivalent, "chain " + std::to_string(i) + " broke equivalence: " + fl::to_string(chain.origin) +
                                " vs " + fl::to_string(chain.result));
  }
  const double secs = seconds_since(start);
  c.require(secs < 60.0, "took " + std::to_string(secs) + " s");
  if (c.out.pass) c.out.detail = "500 chains, " + std::to_string(applied) + " rewrites, " + std::to_string(secs) + " s";
  return c.out;
}

Outcome probabilistic_soundness() {
  Checker c;
  ft::Rng rng(7007);
  std::size_t applied = 0;
  for (int i = 0; i < 200; ++i) {
    const fl::Expr e = ft::random_term(rng, ft::uniform(rng, 1, 30), ft::uniform(rng, 1, 4), true);
    const auto chain = fl::rewrite_chain(e, fl::Flavor::kProbabilistic, rng(), ft::uniform(rng, 1, 20));
    applied += chain.steps.size();
    const fl::Lmc a = fl::unfold_prob(fl::PTerm(chain.origin));
    const fl::Lmc b = fl::unfold_prob(fl::PTerm(chain.result));
    const auto r = fl::tzeng_equiv(a, a.root(), b, b.root());
    c.require(r.equivalent, "chain " + std::to_string(i) + " changed the measure: " + fl::to_string(chain.origin) +
                                " vs " + fl::to_string(chain.result));
  }
  std::size_t words = 0;
  for (int i = 0; i < 100; ++i) {
    const fl::Lmc m = ft::random_lmc(rng, ft::uniform(rng, 1, 5), ft::uniform(rng, 1, 3));
    for (std::size_t x = 0; x < m.size(); ++x) {
      c.require(fl::trace_measure(m, x, {}) == 1, "empty word measure differs from 1");
      // Every word to depth 6 over the chain's alphabet, breadth first.
      std::vector<fl::Word> layer{{}};
      for (std::size_t len = 0; len < 6; ++len) {
        std::vector<fl::Word> deeper;
        for (const auto& w : layer) {
          fl::Rational sum(0);
          for (const auto& a : m.alphabet()) {
            fl::Word wa = w;
            wa.push_back(a);
            sum += fl::trace_measure(m, x, wa);
            deeper.push_back(std::move(wa));
          }
          ++words;
          c.require(sum == fl::trace_measure(m, x, w), "additivity fails at " + fl::to_string(w));
        }
        layer = std::move(deeper);
      }
    }
  }
  if (c.out.pass) {
    c.out.detail = "200 chains (" + std::to_string(applied) + " rewrites); additivity exact on " +
                   std::to_string(words) + " words";
  }
  return c.out;
}

std::vector<std::string> union_alphabet(const fl::Lmc& a, const fl::Lmc& b) {
  std::vector<std::string> out = a.alphabet();
  out.insert(out.end(), b.alphabet().begin(), b.alphabet().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Outcome tzeng_vs_brute_force() {
  Checker c;
  ft::Rng rng(8008);
  std::size_t equivalent = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t actions = ft::uniform(rng, 1, 3);
    // Exhaustive depth is the combined state count, so three actions get
    // smaller chains to keep the word count in the thousands.
    const std::size_t cap = actions == 3 ? 3 : 5;
    fl::Lmc l1;
    fl::Lmc l2;
    if (i % 2 == 0) {
      l1 = ft::random_lmc(rng, ft::uniform(rng, 1, cap - 1), actions);
      l2 = ft::split_state(l1, ft::uniform(rng, 0, l1.size() - 1), rng);
    } else {
      l1 = ft::random_lmc(rng, ft::uniform(rng, 1, cap), actions);
      l2 = ft::random_lmc(rng, ft::uniform(rng, 1, cap), actions);
    }
    const std::size_t depth = l1.size() + l2.size();
    const auto alphabet = union_alphabet(l1, l2);
    const auto m1 = ft::all_path_measures(l1, l1.root(), depth, alphabet);
    const auto m2 = ft::all_path_measures(l2, l2.root(), depth, alphabet);
    const bool brute = m1 == m2;
    const auto r = fl::tzeng_equiv(l1, l1.root(), l2, l2.root());
    equivalent += r.equivalent ? 1 : 0;
    c.require(r.equivalent == brute, "pair " + std::to_string(i) + ": tzeng and brute force disagree");
    if (!r.equivalent) {
      c.require(r.witness.has_value(), "pair " + std::to_string(i) + ": no witness");
      if (r.witness) {
        const auto p1 = ft::path_measure(l1, l1.root(), *r.witness);
        const auto p2 = ft::path_measure(l2, l2.root(), *r.witness);
        c.require(p1 != p2 && p1 == r.lhs_measure && p2 == r.rhs_measure,
                  "pair " + std::to_string(i) + ": witness " + fl::to_string(*r.witness) + " does not separate");
      }
    }
  }
  if (c.out.pass) {
    c.out.detail = "200 pairs agree (" + std::to_string(equivalent) + " equivalent), all witnesses separate";
  }
  return c.out;
}

Outcome sampling_consistency() {
  Checker c;
  const fl::Lmc coin = fl::unfold_prob(fl::parse_pterm(slurp(kData / "coin.pterm")));
  const auto halves = fl::parse_interpretation(slurp(kData / "interval.interp"));
  fl::SampleOptions opts;
  opts.truncation = 30;
  opts.samples = 100'000;
  opts.seed = 2024;
  const auto pts = fl::sample_measure(coin, coin.root(), halves, opts);
  const auto left = std::count_if(pts.begin(), pts.end(), [](const fl::Point& p) { return p[0] < 0.5; });
  const double mass = static_cast<double>(left) / static_cast<double>(pts.size());
  c.require(mass >= 0.495 && mass <= 0.505, "mass in [0, 1/2) is " + std::to_string(mass));

  opts.threads = 4;
  const auto again = fl::sample_measure(coin, coin.root(), halves, opts);
  c.require(pts == again, "samples depend on the thread count");

  const fs::path dir = fs::temp_directory_path() / ("fractlang-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string args = "--seed 2024 measure-render " + quote(kData / "coin.pterm") + " -i " +
                           quote(kData / "interval.interp") + " -n 100000 -t 30 --width 256 --height 16 -o ";
  const Run r1 = run_cli(args + quote(dir / "one.pgm"));
  const Run r2 = run_cli("--threads 3 " + args + quote(dir / "two.pgm"));
  c.require(r1.status == 0 && r2.status == 0, "measure-render failed: " + r1.output + r2.output);
  if (r1.status == 0 && r2.status == 0) {
    c.require(slurp(dir / "one.pgm") == slurp(dir / "two.pgm"), "fixed-seed images differ");
  }
  fs::remove_all(dir);
  if (c.out.pass) c.out.detail = "mass " + std::to_string(mass) + ", samples and images byte-identical";
  return c.out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stream evaluation", stream_evaluation},
      {"two-loop example equivalence", two_loops_equivalence},
      {"gasket reproduction", gasket_reproduction},
      {"interval fixture and twisted-gasket pixel", interval_fixture_and_pixels},
      {"contraction rate", contraction_rate},
      {"classic rewrite soundness", classic_soundness},
      {"probabilistic rewrite soundness", probabilistic_soundness},
      {"tzeng vs brute force", tzeng_vs_brute_force},
      {"sampling consistency", sampling_consistency},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
