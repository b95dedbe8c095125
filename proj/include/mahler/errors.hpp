#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mahler {

/// Base for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// No Laurent-series solution exists for the requested degree.
struct InconsistentEquation : Error {
    explicit InconsistentEquation(const std::string& what) : Error(what) {}
};

/// The coefficient system is underdetermined and no seed was supplied.
/// `positions` lists every unresolved coefficient index k (of z^-k).
struct FreeParameter : Error {
    std::vector<long> positions;
    explicit FreeParameter(std::vector<long> pos)
        : Error(describe(pos)), positions(std::move(pos)) {}

  private:
    static std::string describe(const std::vector<long>& pos) {
        std::string s = "free parameter at position";
        if (pos.size() > 1) s += "s";
        for (size_t i = 0; i < pos.size(); ++i)
            s += (i ? ", " : " ") + std::to_string(pos[i]);
        return s;
    }
};

/// A computation ran out of its configured coefficient budget.
struct BudgetExhausted : Error {
    explicit BudgetExhausted(const std::string& what) : Error(what) {}
};

/// The continued-fraction iteration hit an exact zero remainder and the
/// extension budget could not refute rationality of the input.
struct AppearsRational : Error {
    explicit AppearsRational(const std::string& what) : Error(what) {}
};

/// Input file / text could not be parsed.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Irreducible factorization over Q failed (degree cap or precision).
struct FactorizationError : Error {
    explicit FactorizationError(const std::string& what) : Error(what) {}
};

}  // namespace mahler
