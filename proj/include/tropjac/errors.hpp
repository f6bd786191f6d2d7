#pragma once

#include <stdexcept>
#include <string>

namespace tropjac {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data: a value violates a documented precondition or
/// invariant of the domain (bad monoid, bad curve, bad split, ...).
class DomainError : public Error {
 public:
  DomainError(std::string code, const std::string& message)
      : Error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline DomainError not_sharp(const std::string& m) { return {"NotSharp", m}; }
inline DomainError zero_generator(const std::string& m) { return {"ZeroGenerator", m}; }
inline DomainError dimension_mismatch(const std::string& m) { return {"DimensionMismatch", m}; }
inline DomainError not_in_monoid(const std::string& m) { return {"NotInMonoid", m}; }
inline DomainError not_a_face(const std::string& m) { return {"NotAFace", m}; }
inline DomainError disconnected(const std::string& m) { return {"Disconnected", m}; }
inline DomainError zero_length(const std::string& m) { return {"ZeroLength", m}; }
inline DomainError length_not_in_monoid(const std::string& m) { return {"LengthNotInMonoid", m}; }
inline DomainError dangling_endpoint(const std::string& m) { return {"DanglingEndpoint", m}; }
inline DomainError duplicate_id(const std::string& m) { return {"DuplicateId", m}; }
inline DomainError hom_not_monoid_map(const std::string& m) { return {"HomNotMonoidMap", m}; }
inline DomainError bad_split(const std::string& m) { return {"BadSplit", m}; }
inline DomainError basis_mismatch(const std::string& m) { return {"BasisMismatch", m}; }
inline DomainError contracts_an_edge(const std::string& m) { return {"ContractsAnEdge", m}; }
inline DomainError not_finite_subgroup(const std::string& m) { return {"NotFiniteSubgroup", m}; }
inline DomainError not_aligned(const std::string& m) { return {"NotAligned", m}; }
inline DomainError too_large_to_enumerate(const std::string& m) { return {"TooLargeToEnumerate", m}; }

/// Malformed input document (parse or schema failure). Carries the JSON
/// path of the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error("at " + path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Two independently computed sides of a theorem disagreed. This is a
/// self-test failure: it indicates a bug, never a property of the input.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

/// Internal invariant broken (a bug).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tropjac
