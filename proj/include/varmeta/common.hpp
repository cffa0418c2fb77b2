// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace varmeta {

// Error taxonomy. Domain errors derive from Error so callers (and the CLI)
// can map them to structured diagnostics and exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DegenerateFrame : public Error {
public:
  explicit DegenerateFrame(const std::string& msg) : Error(msg) {}
};

class SingularMap : public Error {
public:
  explicit SingularMap(const std::string& msg) : Error(msg) {}
};

class AntipodalDirections : public Error {
public:
  explicit AntipodalDirections(const std::string& msg) : Error(msg) {}
};

class InvalidWeights : public Error {
public:
  explicit InvalidWeights(const std::string& msg) : Error(msg) {}
};

class NonPositiveJacobian : public Error {
public:
  explicit NonPositiveJacobian(const std::string& msg) : Error(msg) {}
};

class NonFinite : public Error {
public:
  explicit NonFinite(const std::string& msg) : Error(msg) {}
};

class EmptySet : public Error {
public:
  explicit EmptySet(const std::string& msg) : Error(msg) {}
};

class NonFiniteObjective : public Error {
public:
  explicit NonFiniteObjective(const std::string& msg) : Error(msg) {}
};

class InfeasibleInit : public Error {
public:
  explicit InfeasibleInit(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

class SchemaError : public Error {
public:
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

class InternalError : public Error {
public:
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

// Global execution knobs. Thread count defaults to the VARMETA_THREADS
// environment variable, falling back to hardware concurrency. Deterministic
// mode forces single-threaded, strictly ordered reductions so repeated runs
// are bitwise identical.
void set_num_threads(int n);
int num_threads();
void set_deterministic(bool on);
bool deterministic();

// Runs fn(begin, end) over [0, count) split into fixed-size blocks. Blocks
// are assigned to worker threads but any reduction done through
// parallel_reduce below combines per-block partials in block order, so the
// result does not depend on the thread count.
void parallel_for_blocks(std::size_t count,
                         const std::function<void(std::size_t, std::size_t)>& fn);

// Block-ordered reduction: partial(b_begin, b_end) is evaluated per block and
// the partials are summed in increasing block order.
double parallel_reduce_sum(std::size_t count,
                           const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace varmeta
