#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "nelab/errors.hpp"

namespace nelab {

// Immutable solution over {0,1}^n. Bits are packed into 64-bit words, bit i of
// the solution is bit (i % 64) of word (i / 64). The ones count is fixed at
// construction; everything downstream scores solutions through it.
class BitString {
public:
    explicit BitString(int n) : n_(check_n(n)), ones_(0), words_((n + 63) / 64, 0) {}

    static BitString all_ones(int n) {
        BitString x(n);
        for (int i = 0; i < n; ++i)
            x.words_[i / 64] |= 1ULL << (i % 64);
        x.ones_ = n;
        return x;
    }

    // "10110" reads left to right as bit 0 .. bit n-1
    static BitString from_string(const std::string& bits) {
        BitString x(static_cast<int>(bits.size()));
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1')
                x.words_[i / 64] |= 1ULL << (i % 64);
            else if (bits[i] != '0')
                throw ArgumentError("BitString::from_string: character is not 0/1");
        }
        x.recount();
        return x;
    }

    // integer encoding, bit i = (label >> i) & 1; inverse of label()
    static BitString from_label(std::uint64_t label, int n) {
        if (n > 64)
            throw ArgumentError("BitString::from_label: n > 64");
        if (n < 64 && (label >> n) != 0)
            throw ArgumentError("BitString::from_label: label out of range for n");
        BitString x(n);
        if (n > 0)
            x.words_[0] = label;
        x.recount();
        return x;
    }

    static BitString from_words(std::vector<std::uint64_t> words, int n) {
        BitString x(n);
        if (words.size() != x.words_.size())
            throw ArgumentError("BitString::from_words: word count mismatch");
        x.words_ = std::move(words);
        if (n % 64 != 0)
            x.words_.back() &= (1ULL << (n % 64)) - 1;
        x.recount();
        return x;
    }

    int size() const { return n_; }
    int ones() const { return ones_; }

    bool bit(int i) const {
        if (i < 0 || i >= n_)
            throw ArgumentError("BitString::bit: index out of range");
        return (words_[i / 64] >> (i % 64)) & 1ULL;
    }

    std::uint64_t label() const {
        if (n_ > 64)
            throw ArgumentError("BitString::label: n > 64");
        return words_.empty() ? 0 : words_[0];
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (int i = 0; i < n_; ++i)
            if ((words_[i / 64] >> (i % 64)) & 1ULL)
                s[i] = '1';
        return s;
    }

    BitString with_flipped(int i) const {
        BitString x = *this;
        if (i < 0 || i >= n_)
            throw ArgumentError("BitString::with_flipped: index out of range");
        x.words_[i / 64] ^= 1ULL << (i % 64);
        x.ones_ += x.bit(i) ? 1 : -1;
        return x;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    static int check_n(int n) {
        if (n < 1)
            throw ArgumentError("BitString: n must be >= 1");
        return n;
    }

    void recount() {
        int c = 0;
        for (std::uint64_t w : words_)
            c += std::popcount(w);
        ones_ = c;
    }

    int n_;
    int ones_;
    std::vector<std::uint64_t> words_;
};

} // namespace nelab
