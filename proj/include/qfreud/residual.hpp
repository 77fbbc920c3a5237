#pragma once

#include "qfreud/real.hpp"

#include <string>
#include <vector>

namespace qfreud {

struct ResidualEntry {
    long index;
    Real value;
};

/// A named collection of (index, residual) values with its max |value| and
/// the index attaining it.
class ResidualReport {
public:
    explicit ResidualReport(std::string name) : name_(std::move(name)), max_abs_(0) {}

    void add(long index, const Real& value) {
        entries_.push_back({index, value});
        Real a = abs(value);
        if (argmax_ < 0 || a > max_abs_) {
            max_abs_ = a;
            argmax_ = index;
        }
    }

    const std::string& name() const { return name_; }
    const std::vector<ResidualEntry>& entries() const { return entries_; }
    const Real& max_abs() const { return max_abs_; }
    long argmax() const { return argmax_; }
    bool empty() const { return entries_.empty(); }

private:
    std::string name_;
    std::vector<ResidualEntry> entries_;
    Real max_abs_;
    long argmax_ = -1;
};

}  // namespace qfreud
