#ifndef WNN_BITSET_HPP
#define WNN_BITSET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace wnn {

namespace internal {

/**
 * Fixed-size dynamic bitset over `std::uint64_t` words.
 */
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const noexcept { return size_; }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const noexcept {
        std::size_t total = 0;
        for (auto w : words_) {
            total += static_cast<std::size_t>(std::popcount(w));
        }
        return total;
    }

    bool any() const noexcept {
        for (auto w : words_) {
            if (w) return true;
        }
        return false;
    }

    /// Size of the intersection with `other`.
    std::size_t count_and(const Bitset& other) const noexcept {
        std::size_t total = 0;
        for (std::size_t k = 0; k < words_.size(); ++k) {
            total += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
        }
        return total;
    }

    bool intersects(const Bitset& other) const noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            if (words_[k] & other.words_[k]) return true;
        }
        return false;
    }

    Bitset& operator|=(const Bitset& other) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }

    Bitset& operator&=(const Bitset& other) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
        return *this;
    }

    /// Clears every bit that is set in `other`.
    Bitset& subtract(const Bitset& other) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
        return *this;
    }

    template<typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            auto w = words_[k];
            while (w) {
                const int bit = std::countr_zero(w);
                fn(k * 64 + static_cast<std::size_t>(bit));
                w &= w - 1;
            }
        }
    }

    friend bool operator==(const Bitset&, const Bitset&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}

}

#endif
