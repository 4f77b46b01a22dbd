#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "zdsi/error.hpp"
#include "zdsi/rational.hpp"

namespace zdsi {

/// A bit string, possibly empty. Stored as '0'/'1' characters.
class Codeword {
public:
    Codeword() = default;
    explicit Codeword(std::string bits) : bits_(std::move(bits))
    {
        for (char c : bits_)
            if (c != '0' && c != '1') fail(Errc::ParseError, "codeword contains a non-binary character");
    }

    std::size_t length() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    const std::string& bits() const { return bits_; }
    char operator[](std::size_t i) const { return bits_[i]; }

    /// True when this codeword is a (non-strict) prefix of `other`.
    bool is_prefix_of(const Codeword& other) const
    {
        return bits_.size() <= other.bits_.size() && std::string_view(other.bits_).substr(0, bits_.size()) == bits_;
    }

    Codeword with_prefix(char bit) const { return Codeword(std::string(1, bit) + bits_); }

    friend bool operator==(const Codeword&, const Codeword&) = default;
    friend auto operator<=>(const Codeword&, const Codeword&) = default;

private:
    std::string bits_;
};

/// Two codewords can coexist on an edge iff neither is a prefix of (or equal to) the other.
inline bool prefix_compatible(const Codeword& a, const Codeword& b) { return !a.is_prefix_of(b) && !b.is_prefix_of(a); }

/// Codeword per source symbol together with its exact average length.
struct RIProtocol {
    std::vector<Codeword> codewords;
    Rational average_length;
};

} // namespace zdsi
