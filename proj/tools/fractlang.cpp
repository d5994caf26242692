// Command-line front end. Exit status: 0 success or equivalent, 1 inequivalent
// or rejected, 2 usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "fractlang/error.hpp"
#include "fractlang/fractal.hpp"
#include "fractlang/geometry.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/measure.hpp"
#include "fractlang/parser.hpp"
#include "fractlang/proof.hpp"
#include "fractlang/render.hpp"
#include "fractlang/trace_equiv.hpp"

namespace fl = fractlang;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fl::Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fl::Error("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Files holding `state`/`edge` lines are explicit systems; anything else is
// a term.
bool is_system_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    return word == "state" || word == "edge";
  }
  return false;
}

fl::ProofSystem system_of(const std::string& name) {
  return name == "prob" ? fl::ProofSystem::kProbabilistic : fl::ProofSystem::kClassic;
}

fl::Lts load_lts(const std::string& path, fl::ProofSystem system) {
  const std::string text = read_input(path);
  if (is_system_text(text)) {
    if (system == fl::ProofSystem::kProbabilistic) return fl::lmc_from_text(text).underlying();
    return fl::lts_from_text(text);
  }
  if (system == fl::ProofSystem::kProbabilistic) return fl::unfold_prob(fl::parse_pterm(text)).underlying();
  return fl::unfold(fl::parse_term(text));
}

fl::Lmc load_lmc(const std::string& path) {
  const std::string text = read_input(path);
  if (is_system_text(text)) return fl::lmc_from_text(text);
  return fl::unfold_prob(fl::parse_pterm(text));
}

std::vector<double> split_numbers(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fl::Error(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  return out;
}

fl::Point parse_point(const std::string& s, int dim) {
  const auto v = split_numbers(s, "--p0");
  if (static_cast<int>(v.size()) != dim) {
    throw fl::Error("--p0 needs " + std::to_string(dim) + " comma-separated coordinates");
  }
  fl::Point p{};
  for (int i = 0; i < dim; ++i) p[i] = v[i];
  return p;
}

std::optional<fl::BBox> parse_bbox(const std::string& s) {
  if (s == "auto") return std::nullopt;
  const auto v = split_numbers(s, "--bbox");
  if (v.size() != 4) throw fl::Error("--bbox needs xmin,ymin,xmax,ymax or 'auto'");
  return fl::BBox{v[0], v[1], v[2], v[3]};
}

std::string word_text(const fl::Word& w) { return w.empty() ? "ε" : fl::to_string(w); }

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct ImageFlags {
  std::size_t width = 512;
  std::size_t height = 512;
  std::string bbox = "auto";
  std::string out = "-";
  std::string p0;
};

void add_image_flags(CLI::App* cmd, ImageFlags& f) {
  cmd->add_option("--width", f.width, "Image width in pixels")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--height", f.height, "Image height in pixels")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--bbox", f.bbox, "xmin,ymin,xmax,ymax or 'auto' (tight bound plus 2% margin)")
      ->capture_default_str();
  cmd->add_option("-o,--out", f.out, "Output image ('-' for stdout)")->capture_default_str();
  cmd->add_option("--p0", f.p0, "Base point, comma separated (default: origin)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process terms as fractal recipes: parse, unfold, compare, prove, render."};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults (flags given on the command line win)");

  Globals g;
  app.add_option("--seed", g.seed, "Random seed for sampling")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string system_name = "classic";
  auto add_system = [&](CLI::App* cmd) {
    cmd->add_option("--system", system_name, "Term language: classic (+) or prob (+[r])")
        ->check(CLI::IsMember({"classic", "prob"}))
        ->capture_default_str();
  };

  std::string file;
  std::string file2;

  auto* parse = app.add_subcommand("parse", "Check a term and print it in canonical form");
  parse->add_option("FILE", file, "Term file ('-' for stdin)")->required();
  add_system(parse);

  auto* dump = app.add_subcommand("dump-lts", "Unfold a term into its transition system");
  dump->add_option("FILE", file, "Term file")->required();
  add_system(dump);

  auto* equiv = app.add_subcommand("equiv", "Decide trace equivalence of two terms or systems");
  equiv->add_option("FILE1", file, "First term or system")->required();
  equiv->add_option("FILE2", file2, "Second term or system")->required();
  add_system(equiv);

  auto* check = app.add_subcommand("check-proof", "Check an equational derivation");
  check->add_option("FILE", file, "Derivation file")->required();
  add_system(check);

  std::size_t depth = 8;
  std::string interp_path;
  std::size_t state = 0;
  std::string snap = "auto";
  ImageFlags img;
  auto* render = app.add_subcommand("render", "Approximate a subfractal and write it as PPM");
  render->add_option("FILE", file, "Term or system")->required();
  render->add_option("-i,--interp", interp_path, "Interpretation file")->required();
  render->add_option("-d,--depth", depth, "Iterations of the system operator")->capture_default_str();
  render->add_option("--state", state, "State whose component is drawn")->capture_default_str();
  render->add_option("--snap", snap, "Snap pitch: 'auto' (pixel pitch past 1e6 points), 'off', or a number")
      ->capture_default_str();
  add_image_flags(render, img);
  add_system(render);

  auto* traces = app.add_subcommand("traces", "List the traces up to a given length");
  traces->add_option("FILE", file, "Term or system")->required();
  traces->add_option("-d,--depth", depth, "Maximum trace length")->capture_default_str();
  add_system(traces);

  std::string word;
  auto* measure = app.add_subcommand("measure", "Exact trace measure of a cylinder");
  measure->add_option("FILE", file, "Probabilistic term or chain")->required();
  measure->add_option("-w,--word", word, "Comma-separated actions (empty for the whole space)");
  measure->add_option("--state", state, "Start state")->capture_default_str();

  auto* mequiv = app.add_subcommand("measure-equiv", "Decide trace-measure equivalence");
  mequiv->add_option("FILE1", file, "First probabilistic term or chain")->required();
  mequiv->add_option("FILE2", file2, "Second probabilistic term or chain")->required();

  std::size_t samples = 100'000;
  std::size_t truncation = 30;
  auto* mrender = app.add_subcommand("measure-render", "Sample a subfractal measure and write it as PGM");
  mrender->add_option("FILE", file, "Probabilistic term or chain")->required();
  mrender->add_option("-i,--interp", interp_path, "Interpretation file")->required();
  mrender->add_option("-n,--samples", samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  mrender->add_option("-t,--truncation", truncation, "Steps per sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mrender->add_option("--state", state, "Start state")->capture_default_str();
  add_image_flags(mrender, img);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  const fl::ProofSystem system = system_of(system_name);
  try {
    if (*parse) {
      const std::string text = read_input(file);
      std::cout << fl::to_string(fl::parse_expr(text, fl::flavor_of(system))) << '\n';
      return kOk;
    }
    if (*dump) {
      const std::string text = read_input(file);
      if (system == fl::ProofSystem::kProbabilistic) {
        std::cout << fl::to_text(fl::unfold_prob(fl::parse_pterm(text)));
      } else {
        std::cout << fl::to_text(fl::unfold(fl::parse_term(text)));
      }
      return kOk;
    }
    if (*equiv) {
      const fl::Lts l1 = load_lts(file, system);
      const fl::Lts l2 = load_lts(file2, system);
      const auto r = fl::trace_equiv(l1, l1.root(), l2, l2.root());
      if (r.equivalent) {
        std::cout << "equivalent\n";
        return kOk;
      }
      std::cout << "not equivalent; witness: " << word_text(*r.witness) << '\n';
      return kNegative;
    }
    if (*check) {
      const auto d = fl::parse_derivation(read_input(file), system);
      const auto v = fl::check(d, system);
      if (v.accepted) {
        std::cout << "accepted (" << d.steps.size() << " steps)\n";
        return kOk;
      }
      std::cout << "rejected at step " << v.failed_step << ": " << v.reason << '\n';
      return kNegative;
    }
    if (*render) {
      const fl::Lts lts = load_lts(file, system);
      const fl::Interpretation interp = fl::parse_interpretation(read_input(interp_path));
      if (state >= lts.size()) throw fl::Error("--state out of range");
      const fl::Point p0 = img.p0.empty() ? fl::Point{} : parse_point(img.p0, interp.dim());
      fl::RenderConfig cfg{img.width, img.height, parse_bbox(img.bbox)};
      fl::validate(cfg);
      fl::SolveOptions opts;
      opts.threads = g.threads;
      if (snap == "auto") {
        fl::BBox box = cfg.bbox ? *cfg.bbox
                                : fl::auto_bbox(fl::solve(lts, interp, std::min<std::size_t>(depth, 6), p0)[state].points,
                                                interp.dim());
        opts.snap_pitch = std::min((box.xmax - box.xmin) / static_cast<double>(cfg.width),
                                   (box.ymax - box.ymin) / static_cast<double>(cfg.height));
      } else if (snap != "off") {
        opts.snap_pitch = split_numbers(snap, "--snap").at(0);
        opts.snap_threshold = 0;
      }
      const auto sv = fl::solve(lts, interp, depth, p0, opts);
      write_output(img.out, fl::render_set(sv[state], cfg));
      std::cerr << sv[state].points.size() << " points, Hausdorff guarantee " << sv[state].guarantee << '\n';
      return kOk;
    }
    if (*traces) {
      const fl::Lts lts = load_lts(file, system);
      const auto ts = fl::traces(lts, lts.root(), depth);
      std::vector<fl::Word> words(ts.words.begin(), ts.words.end());
      std::stable_sort(words.begin(), words.end(),
                       [](const fl::Word& a, const fl::Word& b) { return a.size() < b.size(); });
      for (const auto& w : words) std::cout << word_text(w) << '\n';
      return kOk;
    }
    if (*measure) {
      const fl::Lmc lmc = load_lmc(file);
      if (state >= lmc.size()) throw fl::Error("--state out of range");
      fl::Word w;
      std::stringstream ss(word);
      for (std::string a; std::getline(ss, a, ',');) {
        if (!a.empty()) w.push_back(a);
      }
      std::cout << fl::to_string(fl::trace_measure(lmc, state, w)) << '\n';
      return kOk;
    }
    if (*mequiv) {
      const fl::Lmc l1 = load_lmc(file);
      const fl::Lmc l2 = load_lmc(file2);
      const auto r = fl::tzeng_equiv(l1, l1.root(), l2, l2.root());
      if (r.equivalent) {
        std::cout << "equivalent\n";
        return kOk;
      }
      std::cout << "not equivalent; witness: " << word_text(*r.witness) << " (" << fl::to_string(r.lhs_measure)
                << " vs " << fl::to_string(r.rhs_measure) << ")\n";
      return kNegative;
    }
    if (*mrender) {
      const fl::Lmc lmc = load_lmc(file);
      const fl::Interpretation interp = fl::parse_interpretation(read_input(interp_path));
      if (state >= lmc.size()) throw fl::Error("--state out of range");
      fl::SampleOptions opts;
      opts.truncation = truncation;
      opts.samples = samples;
      opts.seed = g.seed;
      opts.threads = g.threads;
      opts.base = img.p0.empty() ? fl::Point{} : parse_point(img.p0, interp.dim());
      const auto pts = fl::sample_measure(lmc, state, interp, opts);
      const fl::RenderConfig cfg{img.width, img.height, parse_bbox(img.bbox)};
      write_output(img.out, fl::render_measure(pts, interp.dim(), cfg));
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
