#pragma once

#include <functional>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyinv/error.hpp"

namespace polyinv::testing {

// Kind of the polyinv::Error thrown by f; fails the test if none is thrown.
inline ErrorKind error_kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected polyinv::Error";
  return static_cast<ErrorKind>(-1);
}

}  // namespace polyinv::testing
