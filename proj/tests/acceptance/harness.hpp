#pragma once

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

namespace axtile::acceptance {

// A criterion returns an empty string on success or the reason it failed.
using Criterion = std::function<std::string()>;

class Runner {
 public:
  void check(int number, const std::string& title, const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = c();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s (%.0f ms)%s%s\n", why.empty() ? "PASS" : "FAIL", number, title.c_str(), ms,
                why.empty() ? "" : ": ", why.c_str());
    std::fflush(stdout);
    if (!why.empty()) ++failed_;
  }
  int exit_code() const { return failed_ == 0 ? 0 : 1; }

 private:
  int failed_ = 0;
};

}  // namespace axtile::acceptance
