#include "restrictml/metrics.hpp"

#include <numeric>
#include <sstream>

namespace restrictml {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) {
        throw ValueError("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::complement() const { return Rational(den - num, den); }

std::string format_rational(const Rational& r, int decimals) {
    // Half-up decimal rendering in integer arithmetic.
    long long pow10 = 1;
    for (int i = 0; i < decimals; ++i) pow10 *= 10;
    const long long scaled = (r.num * pow10 * 2 + r.den) / (r.den * 2);

    std::ostringstream out;
    out << scaled / pow10;
    if (decimals > 0) {
        std::string frac = std::to_string(scaled % pow10);
        out << '.' << std::string(static_cast<std::size_t>(decimals) - frac.size(), '0')
            << frac;
    }
    return out.str();
}

ConfusionMatrix confusion(const std::vector<int>& predictions,
                          const std::vector<int>& truth) {
    if (predictions.empty()) {
        throw ValueError("confusion: empty input");
    }
    if (predictions.size() != truth.size()) {
        throw ValueError("confusion: predictions and truth differ in length");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (truth[i] == 1) {
            ++(predictions[i] == 1 ? cm.tp : cm.fn);
        } else {
            ++(predictions[i] == 1 ? cm.fp : cm.tn);
        }
    }
    return cm;
}

Rates rates(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) {
        throw ValueError("rates: no positive-class rows (tp + fn = 0)");
    }
    if (cm.tn + cm.fp == 0) {
        throw ValueError("rates: no negative-class rows (tn + fp = 0)");
    }
    Rates r;
    r.sensitivity = Rational(static_cast<long long>(cm.tp),
                             static_cast<long long>(cm.tp + cm.fn));
    r.specificity = Rational(static_cast<long long>(cm.tn),
                             static_cast<long long>(cm.tn + cm.fp));
    r.fnr = r.sensitivity.complement();
    r.fpr = r.specificity.complement();
    return r;
}

namespace {

int nucleotide_index(char c) {
    switch (c) {
        case 'A': return 0;
        case 'T': return 1;
        case 'C': return 2;
        case 'G': return 3;
        default:  return 4;  // N
    }
}

}  // namespace

std::vector<PositionHistogram> position_histograms(
    const std::vector<DnaSequence>& sequences, const std::vector<int>& truth,
    const std::vector<int>& predictions) {
    if (sequences.size() != predictions.size() || sequences.size() != truth.size()) {
        throw ValueError("position_histograms: inputs differ in length");
    }
    std::size_t width = 0;
    for (const DnaSequence& s : sequences) width = std::max(width, s.size());

    std::vector<PositionHistogram> histograms(width);
    for (std::size_t p = 0; p < width; ++p) histograms[p].position = p;

    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const bool is_true = truth[i] == 1;
        const bool correct = predictions[i] == truth[i];
        const auto cell = static_cast<std::size_t>(
            is_true ? (correct ? PositionHistogram::kCorrectTrue
                               : PositionHistogram::kIncorrectTrue)
                    : (correct ? PositionHistogram::kCorrectFalse
                               : PositionHistogram::kIncorrectFalse));
        for (std::size_t p = 0; p < sequences[i].size(); ++p) {
            const auto nt = static_cast<std::size_t>(nucleotide_index(sequences[i][p]));
            ++histograms[p].counts[nt][cell];
        }
    }
    return histograms;
}

std::vector<PositionHistogram> position_histograms(
    const std::vector<SubsequenceEntry>& entries, const std::vector<int>& predictions) {
    std::vector<DnaSequence> sequences;
    std::vector<int> truth;
    sequences.reserve(entries.size());
    truth.reserve(entries.size());
    for (const SubsequenceEntry& entry : entries) {
        sequences.push_back(entry.subsequence);
        truth.push_back(entry.applicable ? 1 : 0);
    }
    return position_histograms(sequences, truth, predictions);
}

std::string position_histograms_csv(const std::vector<PositionHistogram>& histograms) {
    std::ostringstream out;
    out << "position,nucleotide,cell,count\n";
    for (const PositionHistogram& h : histograms) {
        for (std::size_t nt = 0; nt < 5; ++nt) {
            for (std::size_t cell = 0; cell < 4; ++cell) {
                out << h.position + 1 << ',' << PositionHistogram::kNucleotides[nt] << ','
                    << PositionHistogram::kCellNames[cell] << ',' << h.counts[nt][cell]
                    << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace restrictml
