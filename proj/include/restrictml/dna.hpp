#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "restrictml/error.hpp"

namespace restrictml {

// Expansion of an IUPAC symbol as a bitmask over the concrete bases.
using BaseMask = std::uint8_t;

inline constexpr BaseMask kMaskA = 1;
inline constexpr BaseMask kMaskC = 2;
inline constexpr BaseMask kMaskG = 4;
inline constexpr BaseMask kMaskT = 8;
inline constexpr BaseMask kMaskAll = kMaskA | kMaskC | kMaskG | kMaskT;

// Mask of concrete bases an IUPAC symbol stands for; 0 for anything that
// is not one of the 15 degeneracy letters (uppercase or lowercase).
BaseMask iupac_mask(char code);

inline bool is_iupac(char code) { return iupac_mask(code) != 0; }

inline bool is_concrete_base(char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

// True iff a concrete base is in the pattern symbol's expansion.
// The base must be one of A/C/G/T.
bool iupac_match(char pattern, char base);

// Pattern symbol against a text character that may itself be N.  The match
// holds only when every base the text character could stand for is in the
// pattern's expansion: a text N matches only a pattern N, and a concrete
// recognition-site letter never matches a text N.
bool site_symbol_match(char pattern, char text);

// Validated DNA over {A,C,G,T,N}.  Lowercase input is canonicalized to
// uppercase; any other character is rejected.  Immutable after construction.
class DnaSequence {
public:
    DnaSequence() = default;

    // Throws ParseError on the first illegal character.
    explicit DnaSequence(std::string_view text);

    static bool valid_symbol(char c);

    std::size_t size() const { return bases_.size(); }
    bool empty() const { return bases_.empty(); }
    char operator[](std::size_t i) const { return bases_[i]; }

    const std::string& str() const { return bases_; }
    std::string_view view() const { return bases_; }

    DnaSequence subseq(std::size_t pos, std::size_t len) const;

    bool contains(const DnaSequence& needle) const {
        return bases_.find(needle.bases_) != std::string::npos;
    }

    bool operator==(const DnaSequence&) const = default;

private:
    std::string bases_;
};

// Ordinal value of one symbol: A=1/4, T=1/2, C=3/4, G=1, N=0.
double base_ordinal(char c);

// Elementwise ordinal encoding; output length equals input length.
std::vector<double> encode_ordinal(const DnaSequence& seq);

// Reverse order with A<->T, C<->G, N<->N.
DnaSequence reverse_complement(const DnaSequence& seq);

struct FastaRecord {
    std::string id;           // first whitespace-delimited header token
    std::string description;  // remainder of the header line, may be empty
    DnaSequence sequence;
};

// Parses FASTA text: '>' headers, sequence lines concatenated per record.
// Throws ParseError (with line number) on a missing header, an empty
// sequence, or an illegal character.
std::vector<FastaRecord> parse_fasta(std::istream& in);
std::vector<FastaRecord> parse_fasta_file(const std::string& path);

// Round-trip counterpart of parse_fasta; wraps sequence lines at `wrap`.
std::string to_fasta(const std::vector<FastaRecord>& records, std::size_t wrap = 70);

}  // namespace restrictml
