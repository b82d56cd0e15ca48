#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace compcorr {

/// Integer compositions of `n` whose every part is at least `m`.
///
/// `n` is the series length and `m` the minimum number of observations per
/// part. Construction validates `n >= m >= 2`.
class CompositionSpec {
public:
    CompositionSpec(std::size_t n, std::size_t m);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }

    friend bool operator==(const CompositionSpec&, const CompositionSpec&) = default;

private:
    std::size_t n_;
    std::size_t m_;
};

/// An ordered list of part lengths. Value type; carries no reference to the
/// spec that produced it.
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<std::size_t> parts) : parts_(std::move(parts)) {}
    Composition(std::initializer_list<std::size_t> parts) : parts_(parts) {}

    std::span<const std::size_t> parts() const noexcept { return parts_; }
    std::size_t size() const noexcept { return parts_.size(); }
    bool empty() const noexcept { return parts_.empty(); }
    std::size_t operator[](std::size_t i) const { return parts_[i]; }
    std::size_t total() const noexcept;

    /// True when every part is >= spec.m() and the parts sum to spec.n().
    bool is_valid_for(const CompositionSpec& spec) const noexcept;

    /// Renders as `[7,4,8,4]` (no spaces).
    std::string to_string() const;

    /// Parses the `[7,4,8,4]` form; whitespace after commas is tolerated.
    static Composition parse(std::string_view text);

    friend bool operator==(const Composition&, const Composition&) = default;
    friend auto operator<=>(const Composition&, const Composition&) = default;

private:
    std::vector<std::size_t> parts_;
};

/// Streams every composition of a spec in ascending lexicographic order of
/// the parts list, starting at the smallest one and ending with `[n]`.
/// State is the current composition only (O(n) memory).
class CompositionEnumerator {
public:
    explicit CompositionEnumerator(const CompositionSpec& spec);

    /// Advances and returns the next composition, or nullptr once exhausted.
    /// The first call yields the first composition.
    const Composition* next();

    const CompositionSpec& spec() const noexcept { return spec_; }

private:
    void fill_smallest(std::vector<std::size_t>& parts, std::size_t remaining) const;

    CompositionSpec spec_;
    Composition current_;
    bool started_ = false;
    bool done_ = false;
};

/// Range adaptor over CompositionEnumerator, for use in range-for loops.
class CompositionRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Composition;
        using difference_type = std::ptrdiff_t;
        using pointer = const Composition*;
        using reference = const Composition&;

        iterator() = default;
        explicit iterator(CompositionEnumerator* e) : enumerator_(e), current_(e->next()) {}

        reference operator*() const { return *current_; }
        pointer operator->() const { return current_; }
        iterator& operator++()
        {
            current_ = enumerator_->next();
            return *this;
        }
        void operator++(int) { ++*this; }
        bool operator==(std::default_sentinel_t) const { return current_ == nullptr; }

    private:
        CompositionEnumerator* enumerator_ = nullptr;
        const Composition* current_ = nullptr;
    };

    explicit CompositionRange(const CompositionSpec& spec) : enumerator_(spec) {}

    iterator begin() { return iterator(&enumerator_); }
    std::default_sentinel_t end() const { return {}; }

private:
    CompositionEnumerator enumerator_;
};

inline CompositionRange compositions(const CompositionSpec& spec) { return CompositionRange(spec); }

/// Exact number of compositions `enumerate` yields, by dynamic programming
/// over c(0) = 1, c(x) = sum_{p=m..x} c(x - p). Throws CountOverflow when the
/// count does not fit in 64 bits (first happens at n = 95 for m = 2).
std::uint64_t count_compositions(const CompositionSpec& spec);

} // namespace compcorr
