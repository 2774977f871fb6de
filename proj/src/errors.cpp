#include "cozeta/errors.hpp"

namespace cozeta {

JacobiViolation::JacobiViolation(int i_, int j_, int k_, const std::string& what)
    : InputError(what), i(i_), j(j_), k(k_) {}

}  // namespace cozeta
