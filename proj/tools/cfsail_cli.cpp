// cfsail: sails, fundamental domains and torus triangulations of cubic
// continued fractions from the command line.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cfsail/catalog.hpp"

using namespace cfsail;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  f << text;
}

void print_domain(const FundamentalDomain& fd) {
  std::cout << "operator " << str(fd.a) << "\n";
  std::cout << "X = " << str(fd.basis.x()) << "\n";
  std::cout << "Y = " << str(fd.basis.y()) << "\n";
  std::cout << "seed " << fd.seed << (fd.seed_is_vertex ? " (vertex)" : " -> vertex " + to_string(fd.seed_vertex))
            << "\n";
  std::cout << "faces " << fd.faces.size() << ", edge classes " << fd.num_edge_classes << ", vertex classes "
            << fd.num_vertex_classes() << "\n";
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    const auto& F = fd.faces[f];
    std::cout << "face " << f << ": area " << F.area << " distance " << F.distance << " vertices";
    for (const auto& v : F.polygon.vertices) std::cout << " " << v;
    std::cout << "\n";
    for (std::size_t k = 0; k < F.size(); ++k) {
      const auto& l = fd.links[f][k];
      std::cout << "  side " << k << " length " << F.edge_lengths[k] << " -> face " << l.partner_face << " side "
                << l.partner_side << " by X^" << l.word.i << " Y^" << l.word.j << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional continued fractions of cubic irrationalities"};
  app.require_subcommand(1);

  long long m = 0, n = 0;
  std::string seed = "0,0,1", render, out, render_out, left, right, matrix, mrange, nrange, prop;
  long long a = 0, b = 0, bound = 0;
  unsigned jobs = 1;

  auto* classify = app.add_subcommand("classify", "classify the cell A_{m,n}");
  classify->add_option("m", m)->required();
  classify->add_option("n", n)->required();

  auto* sail = app.add_subcommand("sail", "fundamental domain of the sail of A_{m,n}");
  sail->add_option("m", m)->required();
  sail->add_option("n", n)->required();
  sail->add_option("--seed", seed, "integer point x,y,z selecting the orthant");

  auto* torus = app.add_subcommand("torus", "torus triangulation and canonical code of A_{m,n}");
  torus->add_option("m", m)->required();
  torus->add_option("n", n)->required();
  torus->add_option("--render", render, "svg or txt");
  torus->add_option("--out", out, "rendering file (default stdout)");

  auto* grid = app.add_subcommand("grid", "classify a rectangle of cells and write a JSON catalog");
  grid->add_option("--m", mrange, "range a..b")->required();
  grid->add_option("--n", nrange, "range c..d")->required();
  grid->add_option("--render", render, "svg or txt");
  grid->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
  grid->add_option("--out", out, "catalog file (default stdout)");
  grid->add_option("--render-out", render_out, "rendering file (default stdout)");

  auto* verify = app.add_subcommand("verify-prop", "check a proposition fixture against the pipeline");
  verify->add_option("id", prop)->required()->check(CLI::IsMember({"3.1", "3.2", "3.3", "3.4", "3.5"}));
  verify->add_option("--a", a)->required();
  verify->add_option("--b", b);

  auto* equiv = app.add_subcommand("equiv", "bounded search for a conjugator");
  equiv->add_option("--left", left, "nine integers or frobenius:m,n")->required();
  equiv->add_option("--right", right, "nine integers or frobenius:m,n")->required();
  equiv->add_option("--bound", bound)->required()->check(CLI::Range(0LL, 1000LL));

  auto* reach = app.add_subcommand("frobenius-reach", "compare with Frobenius operators of the same field");
  reach->add_option("matrix", matrix, "nine integers or frobenius:m,n")->required();
  reach->add_option("--bound", bound)->required()->check(CLI::Range(0LL, 200LL));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify) {
      GridCell c = classify_cell(m, n);
      std::cout << "A_{" << m << "," << n << "}: " << to_string(c.cls) << "\n";
      std::cout << "chi = x^3 + (" << c.chi[0] << ")x^2 + (" << c.chi[1] << ")x + (" << c.chi[2] << ")\n";
      if (c.faces) std::cout << "torus " << c.faces->str() << "\ncode " << *c.code << "\n";
      if (c.field_discriminant) std::cout << "field discriminant (squarefree part) " << *c.field_discriminant << "\n";
      if (c.error) {
        std::cerr << *c.error << "\n";
        return 3;
      }
      return 0;
    }
    if (*sail) {
      auto fd = build_fundamental_domain(frobenius(BigInt(m), BigInt(n)), parse_vector(seed));
      print_domain(fd);
      return verify_face_identifications(fd).ok() ? 0 : 1;
    }
    if (*torus) {
      auto r = run_pipeline(frobenius(BigInt(m), BigInt(n)));
      if (!render.empty()) {
        write_text(out, render_triangulation(r.torus, render));
        return 0;
      }
      std::cout << summarize(r.torus).str() << " euler " << r.torus.euler_characteristic() << "\n";
      std::cout << "code " << r.code.text << "\n";
      std::cout << render_triangulation(r.torus, "txt");
      return 0;
    }
    if (*grid) {
      IntRange mr = parse_range(mrange), nr = parse_range(nrange);
      if (!render.empty() && render != "svg" && render != "txt")
        throw Error(ErrorKind::UnsupportedFormat, "unknown format '" + render + "'");
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      GridOptions opt;
      opt.jobs = jobs;
      opt.stop = &g_stop;
      if (!out.empty() && out != "-") opt.persist = [&](const Catalog& c) { write_catalog(out, c); };
      Catalog cat = run_grid(mr, nr, opt);
      if (out.empty() || out == "-") std::cout << render_catalog(cat);
      if (!render.empty()) write_text(render_out, render_grid(cat, render));
      std::size_t errors = 0;
      for (const auto& c : cat.cells) errors += c.error.has_value();
      std::cerr << cat.cells.size() << " cells, " << errors << " pipeline errors"
                << (g_stop ? ", interrupted" : "") << "\n";
      return g_stop ? 130 : 0;
    }
    if (*verify) {
      auto r = verify_proposition(prop, a, b);
      std::cout << "proposition " << r.id << " a=" << r.a << " b=" << r.b << " A_{" << r.m << "," << r.n << "}";
      if (r.summary) std::cout << " " << r.summary->str();
      std::cout << "\n";
      for (const auto& c : r.checks)
        std::cout << (c.passed ? "  pass  " : "  FAIL  ") << c.name << (c.detail.empty() ? "" : ": " + c.detail)
                  << "\n";
      std::cout << (r.passed() ? "PASS" : "FAIL") << "\n";
      return r.passed() ? 0 : 1;
    }
    if (*equiv) {
      auto A = parse_operator(left), B = parse_operator(right);
      auto r = equivalence_search(A, B, bound);
      if (r.codes_distinct)
        std::cout << "codes: " << (*r.codes_distinct ? "distinct (the continued fractions are not equivalent)"
                                                      : "invariants agree")
                  << "\n";
      if (r.found()) {
        std::cout << "conjugator found\n";
        for (const auto& l : r.certificate->transcript) std::cout << "  " << l << "\n";
      } else {
        std::cout << "no conjugator within bound " << r.bound << " (" << r.candidates << " candidates)\n";
      }
      if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
      return 0;
    }
    if (*reach) {
      auto r = frobenius_reachability(parse_operator(matrix), bound);
      std::cout << "field discriminant (squarefree part) " << r.field_discriminant << "\n";
      std::cout << "cells scanned " << r.cells_scanned << ", same field " << r.same_field.size() << "\n";
      for (const auto& [mm, nn] : r.matches) std::cout << "  match A_{" << mm << "," << nn << "}\n";
      for (const auto& e : r.errors) std::cout << "  error " << e << "\n";
      std::cout << r.conclusion() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
