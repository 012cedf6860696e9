#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "restrictml/error.hpp"
#include "restrictml/synthesis.hpp"

namespace restrictml {

// Exact ratio of two nonnegative counts; kept normalized so the identities
// fnr = 1 - sensitivity and fpr = 1 - specificity hold with zero tolerance.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Rational complement() const;  // 1 - this

    bool operator==(const Rational&) const = default;
};

// Renders with a fixed number of decimals (half-up), e.g. "0.949".
std::string format_rational(const Rational& r, int decimals = 3);

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

// Counts with applicable (label 1) as the positive class.
ConfusionMatrix confusion(const std::vector<int>& predictions,
                          const std::vector<int>& truth);

struct Rates {
    Rational sensitivity;  // tp / (tp + fn)
    Rational specificity;  // tn / (tn + fp)
    Rational fnr;          // 1 - sensitivity
    Rational fpr;          // 1 - specificity
};

// Throws ValueError naming the empty class when a denominator is zero.
Rates rates(const ConfusionMatrix& cm);

// Per-SEQ-position nucleotide counts split by true class and correctness;
// this backs the misclassification distribution plots.
struct PositionHistogram {
    enum Cell { kCorrectTrue = 0, kIncorrectTrue, kCorrectFalse, kIncorrectFalse };
    static constexpr const char* kCellNames[4] = {"correct_true", "incorrect_true",
                                                  "correct_false", "incorrect_false"};
    static constexpr const char kNucleotides[5] = {'A', 'T', 'C', 'G', 'N'};

    std::size_t position = 0;
    // counts[nucleotide][cell], nucleotide indexed per kNucleotides
    std::array<std::array<std::uint64_t, 4>, 5> counts{};
};

std::vector<PositionHistogram> position_histograms(
    const std::vector<SubsequenceEntry>& entries, const std::vector<int>& predictions);

// Lower-level variant over raw sequences and 0/1 truth labels.
std::vector<PositionHistogram> position_histograms(
    const std::vector<DnaSequence>& sequences, const std::vector<int>& truth,
    const std::vector<int>& predictions);

std::string position_histograms_csv(const std::vector<PositionHistogram>& histograms);

}  // namespace restrictml
