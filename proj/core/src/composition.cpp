#include "compcorr/composition.hpp"

#include "compcorr/error.hpp"

#include <charconv>
#include <numeric>
#include <string>

namespace compcorr {

CompositionSpec::CompositionSpec(std::size_t n, std::size_t m) : n_(n), m_(m)
{
    if (m < 2) {
        throw InvalidArgument("minimum part length must be at least 2 (got " + std::to_string(m) + ")");
    }
    if (n < m) {
        throw InvalidArgument("series length " + std::to_string(n) + " is shorter than the minimum part length " +
                              std::to_string(m));
    }
}

std::size_t Composition::total() const noexcept
{
    return std::accumulate(parts_.begin(), parts_.end(), std::size_t{0});
}

bool Composition::is_valid_for(const CompositionSpec& spec) const noexcept
{
    if (parts_.empty()) {
        return false;
    }
    for (std::size_t p : parts_) {
        if (p < spec.m()) {
            return false;
        }
    }
    return total() == spec.n();
}

std::string Composition::to_string() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += std::to_string(parts_[i]);
    }
    out += ']';
    return out;
}

Composition Composition::parse(std::string_view text)
{
    auto fail = [&] { return ParseError("malformed composition '" + std::string(text) + "'"); };
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw fail();
    }
    std::string_view body = text.substr(1, text.size() - 2);
    std::vector<std::size_t> parts;
    while (!body.empty()) {
        while (!body.empty() && body.front() == ' ') {
            body.remove_prefix(1);
        }
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
        if (ec != std::errc{} || value == 0) {
            throw fail();
        }
        parts.push_back(value);
        body.remove_prefix(static_cast<std::size_t>(ptr - body.data()));
        if (!body.empty()) {
            if (body.front() != ',') {
                throw fail();
            }
            body.remove_prefix(1);
            if (body.empty()) {
                throw fail();
            }
        }
    }
    if (parts.empty()) {
        throw fail();
    }
    return Composition(std::move(parts));
}

CompositionEnumerator::CompositionEnumerator(const CompositionSpec& spec) : spec_(spec) {}

// Lexicographically smallest composition of `remaining` with parts >= m,
// appended to `parts`: take m while what is left can still form a part.
void CompositionEnumerator::fill_smallest(std::vector<std::size_t>& parts, std::size_t remaining) const
{
    const std::size_t m = spec_.m();
    while (remaining >= 2 * m) {
        parts.push_back(m);
        remaining -= m;
    }
    parts.push_back(remaining);
}

const Composition* CompositionEnumerator::next()
{
    if (done_) {
        return nullptr;
    }
    if (!started_) {
        started_ = true;
        std::vector<std::size_t> parts;
        parts.reserve(spec_.n() / spec_.m() + 1);
        fill_smallest(parts, spec_.n());
        current_ = Composition(std::move(parts));
        return &current_;
    }

    // The last part is forced by the ones before it, so the successor always
    // changes the second-to-last part: bump it to its next admissible value
    // (one more if the remainder can still form parts, otherwise absorb the
    // whole remainder) and refill the tail minimally. [n] is the last one.
    auto parts = std::vector<std::size_t>(current_.parts().begin(), current_.parts().end());
    if (parts.size() == 1) {
        done_ = true;
        return nullptr;
    }
    const std::size_t last = parts.back();
    parts.pop_back();
    std::size_t& pivot = parts.back();
    const std::size_t rest = last - 1;
    if (rest >= spec_.m()) {
        pivot += 1;
        fill_smallest(parts, rest);
    } else {
        pivot += last;
    }
    current_ = Composition(std::move(parts));
    return &current_;
}

std::uint64_t count_compositions(const CompositionSpec& spec)
{
    const std::size_t n = spec.n();
    const std::size_t m = spec.m();
    // c[x] = number of compositions of x with parts >= m, c[0] = 1.
    // Keep a running sum of c[0..x-m] so each step is O(1).
    std::vector<std::uint64_t> c(n + 1, 0);
    c[0] = 1;
    std::uint64_t window = 0;
    for (std::size_t x = 1; x <= n; ++x) {
        if (x >= m) {
            if (__builtin_add_overflow(window, c[x - m], &window)) {
                throw CountOverflow("number of compositions of " + std::to_string(n) + " with parts >= " +
                                    std::to_string(m) + " exceeds 64 bits");
            }
        }
        c[x] = window;
    }
    return c[n];
}

} // namespace compcorr
