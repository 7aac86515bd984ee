#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lapc {

// Base of every error raised by the library. kind() is the documented class
// name, used by the CLI and the negative-input tests.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define LAPC_ERROR_CLASS(Name)                                               \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}         \
    };

LAPC_ERROR_CLASS(TypeError)
LAPC_ERROR_CLASS(ReductionBudgetError)
LAPC_ERROR_CLASS(UnknownConstant)
LAPC_ERROR_CLASS(DuplicateName)
LAPC_ERROR_CLASS(CyclicUnfold)
LAPC_ERROR_CLASS(UnsupportedInductive)
LAPC_ERROR_CLASS(NotQuasiMono)
LAPC_ERROR_CLASS(SubstitutionIllFormed)
LAPC_ERROR_CLASS(UnsupportedType)
LAPC_ERROR_CLASS(LevelTooLow)
LAPC_ERROR_CLASS(UnsupportedInEmission)
LAPC_ERROR_CLASS(PreprocessError)
LAPC_ERROR_CLASS(ConfigError)

#undef LAPC_ERROR_CLASS

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& expected)
        : Error("ParseError", std::to_string(line) + ":" + std::to_string(column) +
                                  ": expected " + expected),
          line_(line), column_(column), expected_(expected) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t line_, column_;
    std::string expected_;
};

// Wraps an error escaping a pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& inner)
        : Error(inner.kind(), stage + ": " + inner.what()), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace lapc
