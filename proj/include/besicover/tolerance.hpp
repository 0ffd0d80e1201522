#pragma once

namespace besicover {

// Slack used by every geometric predicate: abs + rel * |scale|.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  double slack(double scale) const;
};

// Process-wide tolerance. Defaults to 1e-9 absolute and relative.
Tolerance tolerance();
void set_tolerance(Tolerance tol);

// Predicates on lengths under the current tolerance.
bool within(double length, double bound);          // length <= bound + slack
bool strictly_beyond(double length, double bound);  // length >  bound + slack

}  // namespace besicover
