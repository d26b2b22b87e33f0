#pragma once

#include <stdexcept>
#include <string>

namespace spa {

// Invalid inputs or configuration (CLI exit code 2).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: poles, singular conversions, non-convergence (CLI exit code 3).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Synthesis produced an unrealizable network (CLI exit code 4).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spa
