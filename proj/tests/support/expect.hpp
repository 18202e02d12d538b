#pragma once

#include <gtest/gtest.h>

#include "dfbench/error.hpp"

// Asserts that `stmt` throws dfbench::Error of the given kind.
#define EXPECT_DFB_ERROR(stmt, expected_kind)                                  \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "no exception from " #stmt;                             \
    } catch (const ::dfbench::Error& e__) {                                    \
      EXPECT_EQ(::dfbench::ErrorKindName(e__.kind()),                          \
                ::dfbench::ErrorKindName(expected_kind))                       \
          << e__.what();                                                       \
    }                                                                          \
  } while (0)
