"""
Test suite for slug and short-name helpers.
"""

import unittest

from persistence.naming import short_name, slugify


class TestSlugify(unittest.TestCase):
    def test_turkish_names(self):
        cases = {
            "İstanbul Üniversitesi": "istanbul-universitesi",
            "Boğaziçi Üniversitesi": "bogazici-universitesi",
            "Şırnak Üniversitesi": "sirnak-universitesi",
            "Orta Doğu Teknik Üniversitesi": "orta-dogu-teknik-universitesi",
            "  Kara Harp Okulu ": "kara-harp-okulu",
        }
        for name, expected in cases.items():
            with self.subTest(name=name):
                self.assertEqual(slugify(name), expected)

    def test_name_without_ascii_letters(self):
        with self.assertRaises(ValueError):
            slugify("---")


class TestShortName(unittest.TestCase):
    def test_explicit_abbreviations(self):
        self.assertEqual(short_name("Karamanoğlu Mehmetbey Üniversitesi"), "K. Mehmetbey")
        self.assertEqual(short_name("Ağrı İbrahim Çeçen Üniversitesi"), "Ağrı İ. Çeçen")

    def test_suffix_is_dropped(self):
        self.assertEqual(short_name("Gazi Üniversitesi"), "Gazi")

    def test_other_names_are_unchanged(self):
        self.assertEqual(short_name("Deniz Harp Okulu"), "Deniz Harp Okulu")


if __name__ == "__main__":
    unittest.main()
