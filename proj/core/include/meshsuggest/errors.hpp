#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace meshsuggest {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

// --- file loading ---

class MissingFile : public Error {
public:
    explicit MissingFile(std::string path)
        : Error("file not found: " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A record in a line-oriented input file could not be parsed. Line numbers are 1-based.
class MalformedRecord : public Error {
public:
    MalformedRecord(std::size_t line, const std::string& why)
        : Error("malformed record at line " + std::to_string(line) + ": " + why), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// --- vocabulary ---

class DuplicateUid : public Error {
public:
    explicit DuplicateUid(std::string uid) : Error("duplicate uid: " + uid), uid_(std::move(uid)) {}
    const std::string& uid() const noexcept { return uid_; }

private:
    std::string uid_;
};

class UnknownUid : public Error {
public:
    explicit UnknownUid(std::string uid) : Error("unknown uid: " + uid), uid_(std::move(uid)) {}
    const std::string& uid() const noexcept { return uid_; }

private:
    std::string uid_;
};

// --- embeddings ---

/// Vector length does not match the store dimension. `line` is 0 when the mismatch is not file-bound.
class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t line, const std::string& why)
        : Error(line ? "dimension mismatch at line " + std::to_string(line) + ": " + why
                     : "dimension mismatch: " + why),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NonFiniteValue : public Error {
public:
    explicit NonFiniteValue(std::size_t line)
        : Error("non-finite value at line " + std::to_string(line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownKeyword : public Error {
public:
    explicit UnknownKeyword(std::string keyword)
        : Error("keyword has no precomputed embedding: " + keyword), keyword_(std::move(keyword)) {}
    const std::string& keyword() const noexcept { return keyword_; }

private:
    std::string keyword_;
};

class EncoderUnavailable : public Error {
public:
    using Error::Error;
};

class EncoderBadResponse : public Error {
public:
    using Error::Error;
};

// --- upstream services ---

class UpstreamUnavailable : public Error {
public:
    using Error::Error;
};

class RateLimited : public Error {
public:
    using Error::Error;
};

/// Upstream refused the query itself (syntax error etc.). Never retried.
class QueryRejected : public Error {
public:
    using Error::Error;
};

class MalformedResponse : public Error {
public:
    using Error::Error;
};

class ResultTruncated : public Error {
public:
    ResultTruncated(std::size_t total, std::size_t cap)
        : Error("query matches " + std::to_string(total) + " records, above the cap of " +
                std::to_string(cap)),
          total_(total) {}
    std::size_t total() const noexcept { return total_; }

private:
    std::size_t total_;
};

// --- query tools ---

/// `position` is a 0-based byte offset into the query text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& why)
        : Error("syntax error at " + std::to_string(position) + ": " + why), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnsupportedStructure : public Error {
public:
    using Error::Error;
};

class EmptyAfterStrip : public Error {
public:
    EmptyAfterStrip() : Error("query has no keyword clauses once MeSH terms are removed") {}
};

class UnmatchedGroup : public Error {
public:
    explicit UnmatchedGroup(std::vector<std::string> keywords);
    const std::vector<std::string>& keywords() const noexcept { return keywords_; }

private:
    std::vector<std::string> keywords_;
};

// --- suggesters ---

class UnknownMethod : public Error {
public:
    explicit UnknownMethod(std::string name)
        : Error("unknown suggestion method: " + name), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class DuplicateRegistration : public Error {
public:
    explicit DuplicateRegistration(const std::string& name)
        : Error("suggestion method already registered: " + name) {}
};

// --- evaluation ---

class AllTopicsFailed : public Error {
public:
    using Error::Error;
};

class UnjudgedTopic : public Error {
public:
    explicit UnjudgedTopic(std::string id)
        : Error("run contains topic without relevance judgments: " + id), id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

}  // namespace meshsuggest
