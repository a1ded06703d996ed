#pragma once

#include <stdexcept>
#include <string>

namespace isoscope {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed CoNLL-U or records-CSV input; messages carry a line number.
class ParseError : public Error {
public:
    using Error::Error;
};

// A sentence whose head assignments do not form a single rooted tree.
class TreeError : public Error {
public:
    using Error::Error;
};

// Gold/predicted treebanks that cannot be aligned 1:1.
class AlignmentError : public Error {
public:
    using Error::Error;
};

// An operation was asked to score an empty selection (empty treebank,
// empty length bin, empty filtered test set).
class EmptySubsetError : public Error {
public:
    using Error::Error;
};

// Degenerate numeric input: zero variance, collinear covariates,
// singular design matrix, nonpositive values where positives are required.
class StatsError : public Error {
public:
    using Error::Error;
};

// Controlled-split sampling asked for more sentences than the pool holds.
class InsufficientPoolError : public Error {
public:
    using Error::Error;
};

// Filesystem failure while writing outputs.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace isoscope
