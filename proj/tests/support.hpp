#pragma once

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "amred/geometry.hpp"

namespace testing_support {

using amred::Point;
using amred::ScalarFunction;
using amred::Vector;

/// f(x) = c, no analytic gradient.
inline ScalarFunction constant_function(std::size_t n, double c = 2.5) {
    return {"const", n, [c](const Point&) { return c; }, {}};
}

/// f(x) = <a, x> with an analytic gradient.
inline ScalarFunction affine_function(Vector a) {
    const std::size_t n = static_cast<std::size_t>(a.size());
    return {"affine", n, [a](const Point& p) { return a.dot(p); }, [a](const Point&) { return a; }};
}

/// Fresh path under the system temp directory; removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& stem)
        : path_(std::filesystem::temp_directory_path() /
                (stem + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 std::to_string(counter()++))) {}
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    std::string str() const { return path_.string(); }

private:
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::filesystem::path path_;
};

}  // namespace testing_support
