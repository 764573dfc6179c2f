#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flowcast {

// Exit-code categories used by the CLI:
//   2 config, 3 io, 4 data validation, 5 numeric failure.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config: " + msg, 2) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io: " + msg, 3) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error("data: " + msg, 4) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error("numeric: " + msg, 5) {}
};

class FormatError : public DataError {
public:
    FormatError(int line, const std::string& msg)
        : DataError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ScriptSyntaxError : public DataError {
public:
    ScriptSyntaxError(int line, int col, const std::string& msg)
        : DataError("syntax at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

class UnboundVariableError : public DataError {
public:
    UnboundVariableError(int line, const std::string& var)
        : DataError("line " + std::to_string(line) + ": unbound variable '" + var + "'"),
          var_(var) {}
    const std::string& var() const { return var_; }

private:
    std::string var_;
};

class CyclicGraphError : public DataError {
public:
    explicit CyclicGraphError(std::vector<int> cycle)
        : DataError("graph contains a cycle"), cycle_(std::move(cycle)) {}
    const std::vector<int>& cycle() const { return cycle_; }

private:
    std::vector<int> cycle_;
};

class UnknownNodeError : public DataError {
public:
    explicit UnknownNodeError(int id)
        : DataError("unknown node id " + std::to_string(id)) {}
};

class EmbeddingMissError : public DataError {
public:
    explicit EmbeddingMissError(const std::string& text)
        : DataError("no embedding for text: \"" + text + "\"") {}
};

class ShapeMismatchError : public NumericError {
public:
    explicit ShapeMismatchError(const std::string& msg)
        : NumericError("shape mismatch: " + msg) {}
};

class EmptySplitError : public DataError {
public:
    explicit EmptySplitError(const std::string& which)
        : DataError("empty " + which + " split") {}
};

class EmptyProbeSetError : public DataError {
public:
    EmptyProbeSetError() : DataError("task filtering needs a non-empty probe set") {}
};

class TooFewSamplesError : public DataError {
public:
    explicit TooFewSamplesError(size_t n)
        : DataError("cannot split " + std::to_string(n) + " samples (need >= 10)") {}
};

class UnresolvedIdError : public DataError {
public:
    UnresolvedIdError(int line, const std::string& kind, const std::string& id)
        : DataError("line " + std::to_string(line) + ": label references unknown " + kind +
                     " '" + id + "'") {}
};

class LengthMismatchError : public DataError {
public:
    LengthMismatchError(size_t a, size_t b)
        : DataError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class EmptyInputError : public DataError {
public:
    explicit EmptyInputError(const std::string& what)
        : DataError(what + " must not be empty") {}
};

class KOutOfRangeError : public DataError {
public:
    KOutOfRangeError(int k, size_t n)
        : DataError("k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]") {}
};

class MissingWorkflowError : public DataError {
public:
    explicit MissingWorkflowError(const std::string& id)
        : DataError("workflow '" + id + "' has no test samples") {}
};

class NoApplicableMoveError : public DataError {
public:
    NoApplicableMoveError() : DataError("no mutation is applicable to this graph") {}
};

} // namespace flowcast
