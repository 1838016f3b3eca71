#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace analogc::hml {

enum class Tok { Ident, Number, LBrace, RBrace, LBracket, RBracket, LParen, RParen, Semi, Dot, Plus, Minus, Star, Slash, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

const char* token_name(Tok kind);

// Throws SourceError on characters outside the language.
std::vector<Token> tokenize(std::string_view text);

}  // namespace analogc::hml
