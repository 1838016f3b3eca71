#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace analogc {

using SiteId = std::uint32_t;
using Complex = std::complex<double>;

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(PauliOp op);

// Phase of a product, stored as a power of i (0..3).
struct Phase {
    std::uint8_t quarter_turns = 0;

    Complex value() const;
    Phase operator*(Phase other) const { return Phase{static_cast<std::uint8_t>((quarter_turns + other.quarter_turns) & 3u)}; }
    bool operator==(const Phase&) const = default;
};

struct OpProduct {
    Phase phase;
    PauliOp op;
};

OpProduct pauli_mul(PauliOp a, PauliOp b);

// Tensor product of single-site Paulis. Identity factors are never stored and
// factors stay sorted by site, so the default ordering is canonical.
class PauliString {
public:
    using Factor = std::pair<SiteId, PauliOp>;

    PauliString() = default;
    // Sorts, drops identities; throws std::invalid_argument on a repeated site.
    explicit PauliString(std::vector<Factor> factors);

    static PauliString single(SiteId site, PauliOp op);
    // Parses compact tags such as "Z0Z1" or "X3"; "I" or "" is the identity.
    static PauliString parse(std::string_view tag);

    PauliOp at(SiteId site) const;
    std::span<const Factor> factors() const { return factors_; }
    bool is_identity() const { return factors_.empty(); }
    std::size_t weight() const { return factors_.size(); }
    std::vector<SiteId> support() const;
    SiteId max_site() const;

    // Tag form used in reports, e.g. "Z0Z1"; identity prints as "I".
    std::string str() const;

    auto operator<=>(const PauliString&) const = default;
    bool operator==(const PauliString&) const = default;

private:
    std::vector<Factor> factors_;
};

struct StringProduct {
    Phase phase;
    PauliString result;
};

StringProduct string_mul(const PauliString& p, const PauliString& q);

// True when the two strings anticommute at an odd number of sites.
bool anticommute(const PauliString& p, const PauliString& q);

}  // namespace analogc
