/*!
 * \file treemr/error.h
 * \brief Exception types shared by all treemr modules.
 */
#ifndef TREEMR_ERROR_H_
#define TREEMR_ERROR_H_

#include <stdexcept>
#include <string>

namespace treemr {

/*! \brief Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OntologyError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class UnbalancedBrackets : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

/*! \brief A tree violates the structural rules of the ontology. */
class InvalidTree : public Error {
 public:
  using Error::Error;
};

class NoValidAlignment : public Error {
 public:
  using Error::Error;
};

class UnknownPlaceholder : public Error {
 public:
  using Error::Error;
};

class UnknownToken : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class ScorerUnavailable : public Error {
 public:
  using Error::Error;
};

class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

class NoTemplate : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

class MalformedLine : public Error {
 public:
  MalformedLine(size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

}  // namespace treemr

#endif  // TREEMR_ERROR_H_
