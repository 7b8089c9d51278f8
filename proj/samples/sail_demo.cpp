// Builds the torus triangulation of A_{-1,2} and of one first-family
// operator, prints their invariants and writes an SVG of the second.

#include <fstream>
#include <iostream>

#include "cfsail/catalog.hpp"

int main() {
  using namespace cfsail;

  auto small = run_pipeline(frobenius(-1, 2));
  std::cout << "A_{-1,2}: " << summarize(small.torus).str() << "\n  " << small.code.text << "\n";

  auto fixture = make_fixture("3.1", 1, 6);
  auto r = run_pipeline(fixture.op());
  std::cout << "A_{" << fixture.m << "," << fixture.n << "}: " << summarize(r.torus).str() << "\n";
  for (const auto& f : r.torus.faces)
    std::cout << "  face: area " << f.area << ", distance " << f.distance << ", type " << f.type.code() << "\n";

  std::ofstream("prop31_b6.svg") << render_triangulation(r.torus, "svg");
  std::cout << "wrote prop31_b6.svg\n";
}
