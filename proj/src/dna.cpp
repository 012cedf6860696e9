#include "restrictml/dna.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace restrictml {

namespace {

constexpr std::array<BaseMask, 256> make_iupac_table() {
    std::array<BaseMask, 256> table{};
    auto set = [&table](char c, BaseMask m) {
        table[static_cast<unsigned char>(c)] = m;
        table[static_cast<unsigned char>(c + ('a' - 'A'))] = m;
    };
    set('A', kMaskA);
    set('C', kMaskC);
    set('G', kMaskG);
    set('T', kMaskT);
    set('R', kMaskA | kMaskG);
    set('Y', kMaskC | kMaskT);
    set('S', kMaskC | kMaskG);
    set('W', kMaskA | kMaskT);
    set('K', kMaskG | kMaskT);
    set('M', kMaskA | kMaskC);
    set('B', kMaskC | kMaskG | kMaskT);
    set('D', kMaskA | kMaskG | kMaskT);
    set('H', kMaskA | kMaskC | kMaskT);
    set('V', kMaskA | kMaskC | kMaskG);
    set('N', kMaskAll);
    return table;
}

constexpr std::array<BaseMask, 256> kIupacTable = make_iupac_table();

}  // namespace

BaseMask iupac_mask(char code) {
    return kIupacTable[static_cast<unsigned char>(code)];
}

bool iupac_match(char pattern, char base) {
    return (iupac_mask(pattern) & iupac_mask(base)) != 0;
}

bool site_symbol_match(char pattern, char text) {
    const BaseMask text_mask = iupac_mask(text);
    return text_mask != 0 && (text_mask & ~iupac_mask(pattern)) == 0;
}

bool DnaSequence::valid_symbol(char c) {
    switch (c) {
        case 'A': case 'C': case 'G': case 'T': case 'N':
        case 'a': case 'c': case 'g': case 't': case 'n':
            return true;
        default:
            return false;
    }
}

DnaSequence::DnaSequence(std::string_view text) {
    bases_.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!valid_symbol(c)) {
            throw ParseError("illegal character '" + std::string(1, c) +
                             "' at offset " + std::to_string(i));
        }
        bases_.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
}

DnaSequence DnaSequence::subseq(std::size_t pos, std::size_t len) const {
    if (pos > bases_.size() || len > bases_.size() - pos) {
        throw ValueError("subsequence range [" + std::to_string(pos) + ", " +
                         std::to_string(pos + len) + ") out of bounds for length " +
                         std::to_string(bases_.size()));
    }
    DnaSequence out;
    out.bases_ = bases_.substr(pos, len);
    return out;
}

double base_ordinal(char c) {
    switch (c) {
        case 'A': return 0.25;
        case 'T': return 0.5;
        case 'C': return 0.75;
        case 'G': return 1.0;
        default:  return 0.0;  // N
    }
}

std::vector<double> encode_ordinal(const DnaSequence& seq) {
    std::vector<double> out(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        out[i] = base_ordinal(seq[i]);
    }
    return out;
}

DnaSequence reverse_complement(const DnaSequence& seq) {
    std::string rc(seq.size(), 'N');
    for (std::size_t i = 0; i < seq.size(); ++i) {
        char c;
        switch (seq[seq.size() - 1 - i]) {
            case 'A': c = 'T'; break;
            case 'T': c = 'A'; break;
            case 'C': c = 'G'; break;
            case 'G': c = 'C'; break;
            default:  c = 'N'; break;
        }
        rc[i] = c;
    }
    return DnaSequence(rc);
}

std::vector<FastaRecord> parse_fasta(std::istream& in) {
    std::vector<FastaRecord> records;
    std::string line;
    std::size_t line_no = 0;

    std::string id;
    std::string description;
    std::string sequence;
    std::size_t header_line = 0;
    bool in_record = false;

    auto flush = [&]() {
        if (!in_record) return;
        if (sequence.empty()) {
            throw ParseError("record '" + id + "' has an empty sequence", header_line);
        }
        records.push_back({id, description, DnaSequence(sequence)});
        sequence.clear();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (line[0] == '>') {
            flush();
            const std::string header = line.substr(1);
            const std::size_t split = header.find_first_of(" \t");
            id = header.substr(0, split);
            description = split == std::string::npos ? "" : header.substr(split + 1);
            if (id.empty()) {
                throw ParseError("header has no identifier", line_no);
            }
            header_line = line_no;
            in_record = true;
        } else {
            if (!in_record) {
                throw ParseError("sequence data before any '>' header", line_no);
            }
            for (char c : line) {
                if (!DnaSequence::valid_symbol(c)) {
                    throw ParseError("illegal character '" + std::string(1, c) + "'",
                                     line_no);
                }
            }
            sequence += line;
        }
    }
    flush();
    return records;
}

std::vector<FastaRecord> parse_fasta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open FASTA file: " + path);
    }
    return parse_fasta(in);
}

std::string to_fasta(const std::vector<FastaRecord>& records, std::size_t wrap) {
    std::ostringstream out;
    for (const auto& record : records) {
        out << '>' << record.id;
        if (!record.description.empty()) out << ' ' << record.description;
        out << '\n';
        const std::string& seq = record.sequence.str();
        for (std::size_t i = 0; i < seq.size(); i += wrap) {
            out << seq.substr(i, wrap) << '\n';
        }
    }
    return out.str();
}

}  // namespace restrictml
