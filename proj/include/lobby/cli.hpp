#pragma once

// Command-line front end: solve | verify | payoffs | simulate | sweep |
// quadrants. Exit status 0 on success, 1 on domain errors (and a failed
// verification), 2 on argument errors.

#include <iosfwd>
#include <string>
#include <vector>

#include "lobby/game.hpp"

namespace lobby::cli {

/// One swept parameter: `steps` evenly spaced values from min to max.
struct SweepAxis {
  double min = 0;
  double max = 0;
  int steps = 1;

  double value(int k) const;
};

struct SweepGrid {
  SweepAxis pi1{0.05, 0.45, 5};
  SweepAxis pi2{0.05, 0.45, 5};
  SweepAxis f1{0.02, 0.92, 6};
  SweepAxis f2{0.02, 0.92, 6};
  SweepAxis alpha{1.25, 3.25, 3};

  std::size_t size() const;
  /// Row-major order with alpha varying fastest; capacity left at Two.
  std::vector<RawParams> points() const;
};

/// "default" or a comma list like "pi1=0.1:0.4:4,alpha=2:2:1"; unnamed
/// axes keep their defaults. Throws std::invalid_argument.
SweepGrid parse_grid(const std::string& text);

/// Header of the sweep CSV for the given options.
std::string sweep_header(bool with_n1, bool with_n2, bool with_simulation);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lobby::cli
