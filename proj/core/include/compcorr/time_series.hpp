#pragma once

#include <span>
#include <string>
#include <vector>

namespace compcorr {

/// An identified, ordered vector of finite observations (n >= 2).
class TimeSeries {
public:
    TimeSeries(std::string id, std::vector<double> values);

    const std::string& id() const noexcept { return id_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::string id_;
    std::vector<double> values_;
};

} // namespace compcorr
