#include "besicover/tolerance.hpp"

#include <atomic>
#include <cmath>

namespace besicover {

namespace {
std::atomic<double> g_abs{1e-9};
std::atomic<double> g_rel{1e-9};
}  // namespace

double Tolerance::slack(double scale) const { return abs + rel * std::fabs(scale); }

Tolerance tolerance() {
  return Tolerance{g_abs.load(std::memory_order_relaxed), g_rel.load(std::memory_order_relaxed)};
}

void set_tolerance(Tolerance tol) {
  g_abs.store(tol.abs, std::memory_order_relaxed);
  g_rel.store(tol.rel, std::memory_order_relaxed);
}

bool within(double length, double bound) { return length <= bound + tolerance().slack(bound); }

bool strictly_beyond(double length, double bound) {
  return length > bound + tolerance().slack(bound);
}

}  // namespace besicover
