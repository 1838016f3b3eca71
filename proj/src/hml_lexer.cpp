#include "hml_lexer.hpp"

#include <cctype>

#include "analogc/hml.hpp"

namespace analogc::hml {

const char* token_name(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Semi: return "';'";
        case Tok::Dot: return "'.'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    auto is_digit = [&](std::size_t k) { return k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])); };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance();
            continue;
        }
        int tl = line, tc = col;
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) advance();
            out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), tl, tc});
            continue;
        }
        if (is_digit(i) || (c == '.' && is_digit(i + 1))) {
            while (is_digit(i)) advance();
            if (i < text.size() && text[i] == '.') {
                advance();
                while (is_digit(i)) advance();
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t save = i;
                int sl = line, sc = col;
                advance();
                if (i < text.size() && (text[i] == '+' || text[i] == '-')) advance();
                if (!is_digit(i)) {
                    i = save;
                    line = sl;
                    col = sc;
                } else {
                    while (is_digit(i)) advance();
                }
            }
            out.push_back({Tok::Number, std::string(text.substr(start, i - start)), tl, tc});
            continue;
        }
        Tok kind;
        switch (c) {
            case '{': kind = Tok::LBrace; break;
            case '}': kind = Tok::RBrace; break;
            case '[': kind = Tok::LBracket; break;
            case ']': kind = Tok::RBracket; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ';': kind = Tok::Semi; break;
            case '.': kind = Tok::Dot; break;
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            default: throw SourceError(std::string("unexpected character '") + c + "'", tl, tc);
        }
        advance();
        out.push_back({kind, std::string(1, c), tl, tc});
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

}  // namespace analogc::hml
