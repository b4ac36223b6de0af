#pragma once

#include <iosfwd>

// Quick invariant checks; returns the number of failures.
int run_selftest(std::ostream& out);
