#pragma once

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "opfold/matrix.hpp"
#include "opfold/rational.hpp"

namespace opfold::testing_util {

inline std::string str(const std::vector<Rational>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
    return os.str() + "]";
}

inline ::testing::AssertionResult same(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a == b) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << str(a) << " != " << str(b);
}

template <class T>
::testing::AssertionResult same(const Matrix<T>& a, const Matrix<T>& b) {
    if (a == b) return ::testing::AssertionSuccess();
    std::ostringstream os;
    os << a << "\n  !=\n" << b;
    return ::testing::AssertionFailure() << os.str();
}

}  // namespace opfold::testing_util
