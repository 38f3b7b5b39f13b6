#pragma once

#include <stdexcept>
#include <string>

namespace qws {

/// A Gram matrix or factorization that is not positive semidefinite beyond tolerance.
class NumericalDegeneracyError : public std::runtime_error {
public:
    NumericalDegeneracyError(int index, const std::string& what) : std::runtime_error(what), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

}  // namespace qws
