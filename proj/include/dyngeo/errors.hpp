// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyngeo {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed JSON text; offset is the byte position reported by the parser.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

// An error that names the label or object it is about.
class LabelError : public Error {
public:
    LabelError(const std::string& what, std::string label)
        : Error(what), label_(std::move(label)) {}
    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

class DanglingLabel : public LabelError {
public:
    explicit DanglingLabel(std::string label)
        : LabelError("dangling label '" + label + "'", label) {}
};

class UnknownLabel : public LabelError {
public:
    explicit UnknownLabel(std::string label)
        : LabelError("unknown label '" + label + "'", label) {}
};

class UnknownObject : public LabelError {
public:
    explicit UnknownObject(std::string ref)
        : LabelError("unknown object '" + ref + "'", ref) {}
};

class NameCollision : public LabelError {
public:
    explicit NameCollision(std::string label)
        : LabelError("label '" + label + "' already names a point at a different location", label) {}
};

class DegenerateAxis : public Error {
public:
    DegenerateAxis() : Error("reflection axis points coincide") {}
};

class DegenerateLine : public Error {
public:
    DegenerateLine() : Error("line endpoints coincide") {}
};

class DegenerateAngle : public Error {
public:
    DegenerateAngle() : Error("angle arm has zero length") {}
};

class DegenerateRelation : public Error {
public:
    using Error::Error;
};

class ActionSchemaError : public Error {
public:
    using Error::Error;
};

class NoFreeParameters : public Error {
public:
    NoFreeParameters() : Error("every point is pinned; nothing to solve for") {}
};

class NonFiniteError : public Error {
public:
    NonFiniteError() : Error("constraint error is not finite") {}
};

class EmptyForm : public Error {
public:
    EmptyForm() : Error("nothing to render") {}
};

class ReasonerExhausted : public Error {
public:
    using Error::Error;
};

// The reasoner answered with something that is not a valid step.
// raw() keeps the offending text for the trajectory log.
class ProtocolError : public Error {
public:
    ProtocolError(const std::string& what, std::string raw)
        : Error(what), raw_(std::move(raw)) {}
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

class Timeout : public Error {
public:
    using Error::Error;
};

class DuplicateProblemId : public LabelError {
public:
    explicit DuplicateProblemId(std::string id)
        : LabelError("duplicate problem id '" + id + "'", id) {}
};

// File missing, unreadable or not in the expected format.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace dyngeo
