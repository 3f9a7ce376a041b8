#include <cctype>
#include <climits>
#include <string>

#include "bonacci/field.hpp"

namespace bonacci {

namespace {

class TermReader {
  public:
    TermReader(const ContextPtr& ctx, std::string text) : ctx_(ctx), s_(std::move(text)) {}

    AlgNum read() {
        if (s_.empty()) {
            fail("empty expression");
        }
        AlgNum total(ctx_);
        bool first = true;
        while (pos_ < s_.size()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = (s_[pos_] == '-') ? -1 : 1;
                ++pos_;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            total += term() * mpq_class(sign);
        }
        return total;
    }

  private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::parse_error, why + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    mpz_class digits() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected digits");
        }
        return mpz_class(s_.substr(start, pos_ - start));
    }

    AlgNum term() {
        mpq_class coeff = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            have_coeff = true;
            mpz_class num = digits();
            mpz_class den = 1;
            if (peek() == '/') {
                ++pos_;
                den = digits();
                if (den == 0) {
                    fail("zero denominator");
                }
            }
            coeff = mpq_class(num, den);
            coeff.canonicalize();
            if (peek() == '*') {
                ++pos_;
                if (peek() != 'b') {
                    fail("expected 'b' after '*'");
                }
            }
        }
        int power = 0;
        if (peek() == 'b') {
            ++pos_;
            power = 1;
            if (peek() == '^') {
                ++pos_;
                long sign = 1;
                if (peek() == '-' || peek() == '+') {
                    sign = (s_[pos_] == '-') ? -1 : 1;
                    ++pos_;
                }
                mpz_class e = digits();
                if (e > 1000000) {
                    fail("exponent out of range");
                }
                power = static_cast<int>(sign * e.get_si());
            }
        } else if (!have_coeff) {
            fail("expected a number or 'b'");
        }
        return AlgNum::beta_power(ctx_, power) * coeff;
    }

    ContextPtr ctx_;
    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace

AlgNum parse_algnum(const ContextPtr& ctx, std::string_view text) {
    std::string compact;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            compact.push_back(ch);
        }
    }
    return TermReader(ctx, std::move(compact)).read();
}

} // namespace bonacci
