import pytest
from hypothesis import given
from hypothesis import strategies as st

from landledger import c2i
from landledger.errors import InvalidCodeError, TruncatedStreamError, UnsupportedCharacterError

ALPHABET = sorted(c2i.FORWARD)
alphabet_text = st.text(alphabet=ALPHABET, max_size=10_000)


class TestTable:
    def test_published_cells(self):
        assert c2i.char_to_code("S") == "29"
        assert c2i.char_to_code("0") == "01"
        assert c2i.char_to_code("y") == "61"
        assert c2i.char_to_code("9") == "10"
        assert c2i.char_to_code("A") == "11"
        assert c2i.char_to_code("Z") == "36"
        assert c2i.char_to_code("a") == "37"
        assert c2i.char_to_code("z") == "62"
        assert c2i.char_to_code("$") == "85"
        assert c2i.code_to_char("12") == "B"
        assert c2i.code_to_char("95") == "}"

    def test_blank_cells_resolved_by_set_difference(self):
        # the two codes the published table leaves blank
        assert c2i.char_to_code(" ") == "63"
        assert c2i.char_to_code("|") == "94"
        listed = set(c2i.FORWARD) - {" ", "|"}
        unlisted = {chr(c) for c in range(0x20, 0x7F)} - listed
        assert unlisted == {" ", "|"}

    def test_bijection(self):
        assert len(c2i.FORWARD) == 95
        codes = sorted(int(v) for v in c2i.FORWARD.values())
        assert codes == list(range(1, 96))
        for ch in c2i.FORWARD:
            assert c2i.code_to_char(c2i.char_to_code(ch)) == ch

    def test_domain_is_printable_ascii(self):
        assert set(c2i.FORWARD) == {chr(c) for c in range(0x20, 0x7F)}

    def test_unmapped_character_is_hard_error(self):
        for ch in ("\t", "\n", "é", "\x00", "অ"):
            with pytest.raises(UnsupportedCharacterError):
                c2i.char_to_code(ch)

    def test_invalid_codes(self):
        for code in ("00", "96", "99", "ab", "5", "123"):
            with pytest.raises(InvalidCodeError):
                c2i.code_to_char(code)


class TestEncodeDecode:
    def test_buy(self):
        assert c2i.encode_text("Buy") == "125761"

    def test_seller(self):
        assert c2i.encode_text("Seller") == "294148484154"

    def test_decode_seller(self):
        assert c2i.decode_digits("294148484154") == "Seller"

    def test_empty(self):
        assert c2i.encode_text("") == ""
        assert c2i.decode_digits("") == ""

    def test_length_law(self):
        for text in ("a", "Buy", "Dag number: 8000", " " * 40):
            assert len(c2i.encode_text(text)) == 2 * len(text)

    def test_unsupported_character_carries_position(self):
        with pytest.raises(UnsupportedCharacterError) as exc:
            c2i.encode_text("ok\tthen")
        assert exc.value.detail["position"] == 2

    def test_odd_length_stream(self):
        with pytest.raises(TruncatedStreamError):
            c2i.decode_digits("123")

    def test_out_of_range_pair(self):
        with pytest.raises(InvalidCodeError):
            c2i.decode_digits("96")

    def test_invalid_pair_index_reported(self):
        with pytest.raises(InvalidCodeError) as exc:
            c2i.decode_digits("120099")
        assert exc.value.detail["pair_index"] == 1


@given(alphabet_text)
def test_roundtrip_property(text):
    assert c2i.decode_digits(c2i.encode_text(text)) == text


@given(alphabet_text)
def test_overhead_reduction_is_exactly_one_third(text):
    # 2 digits per char versus 3 for ASCII-decimal
    assert len(c2i.encode_text(text)) * 3 == 2 * (3 * len(text))
