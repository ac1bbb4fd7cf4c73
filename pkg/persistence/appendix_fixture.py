"""
Embedded appendix table of the normalized web reputation index.

The rows below are the published normalized index values of the 170 Turkish
universities, transcribed in the printed (ascending) order with dot decimals.
They serve as the verification fixture for the statistics, ranking and
report operations: the summary figures (mean 0.280, maximum 0.449508,
minimum 0.150473, standard deviation 0.055) and the ten most and least
reputable universities can all be recomputed from this table.

Functions:
    load_appendix_fixture: Return the table as an immutable AppendixFixture.
    fixture_results: Convert the table into IndexResult objects.

Example:
    >>> fixture = load_appendix_fixture()
    >>> fixture.row_count
    170
    >>> max(fixture.values)
    0.449508
"""

from functools import lru_cache

from persistence.models import AppendixEntry, AppendixFixture, IndexResult
from persistence.naming import slugify

# Number of universities stated next to the summary statistics.
DECLARED_UNIVERSITY_COUNT = 170

APPENDIX_ROWS: tuple[tuple[str, float], ...] = (
    ("Deniz Harp Okulu", 0.150473),
    ("Kara Harp Okulu", 0.151046),
    ("Karatay Üniversitesi", 0.188876),
    ("Ankara Bilge Üniversitesi", 0.19034),
    ("Karabük Üniversitesi", 0.196542),
    ("Tunceli Üniversitesi", 0.197094),
    ("Şırnak Üniversitesi", 0.197622),
    ("Karamanoğlu Mehmetbey Üniversitesi", 0.198129),
    ("Avrasya Üniversitesi", 0.200475),
    ("Ağrı İbrahim Çeçen Üniversitesi", 0.205266),
    ("Bozok Üniversitesi", 0.207951),
    ("Kastamonu Üniversitesi", 0.211653),
    ("Fatih Üniversitesi", 0.212482),
    ("Nevşehir Üniversitesi", 0.212873),
    ("Recep Tayyip Erdoğan Üniversitesi", 0.213605),
    ("İğdir Üniversitesi", 0.214206),
    ("Amasya Üniversitesi", 0.216637),
    ("Mimar Sinan Güzel Sanatlar Üniversitesi", 0.218165),
    ("Uluslararası Antalya Üniversitesi", 0.219864),
    ("Gülhane Askeri Tıp Akademisi", 0.219951),
    ("Bingöl Üniversitesi", 0.220551),
    ("Giresun Üniversitesi", 0.222696),
    ("Canik Başarı Üniversitesi", 0.224975),
    ("Üsküdar Üniversitesi", 0.225124),
    ("Gümüşhane Üniversitesi", 0.225604),
    ("İstanbul Bilim Üniversitesi", 0.226898),
    ("Kafkas Üniversitesi", 0.227151),
    ("İstanbul Gelişim Üniversitesi", 0.228233),
    ("Dicle Üniversitesi", 0.232592),
    ("Abdullah Gül Üniversitesi", 0.233152),
    ("İpek Üniversitesi", 0.236428),
    ("Türk Alman Üniversitesi", 0.236529),
    ("İstanbul Medeniyet Üniversitesi", 0.236745),
    ("Yalova Üniversitesi", 0.236952),
    ("Gedik Üniversitesi", 0.23762),
    ("Erzurum Teknik Üniversitesi", 0.239282),
    ("Acıbadem Üniversitesi", 0.241863),
    ("Muş Alparslan Üniversitesi", 0.241893),
    ("Muğla Üniversitesi", 0.242247),
    ("Karadeniz Teknik Üniversitesi", 0.242398),
    ("Niğde Üniversitesi", 0.242484),
    ("Cumhuriyet Üniversitesi", 0.24296),
    ("Bayburt Üniversitesi", 0.24318),
    ("Ufuk Üniversitesi", 0.243264),
    ("İstanbul Medipol Üniversitesi", 0.243413),
    ("Türk Hava Kurumu Üniversitesi", 0.244515),
    ("İstanbul 29 Mayıs Üniversitesi", 0.245219),
    ("Yeni Yüzyıl Üniversitesi", 0.245316),
    ("Erzincan Üniversitesi", 0.248421),
    ("Siirt Üniversitesi", 0.248543),
    ("Toros Üniversitesi", 0.249598),
    ("İzmir Üniversitesi", 0.249888),
    ("Trakya Üniversitesi", 0.251459),
    ("İstanbul Arel Üniversitesi", 0.252223),
    ("İstanbul Mef Üniversitesi", 0.252224),
    ("Bitlis Eren Üniversitesi", 0.254953),
    ("Namık Kemal Üniversitesi", 0.255088),
    ("Fırat Üniversitesi", 0.255303),
    ("Turgut Özal Üniversitesi", 0.2565),
    ("Mevlana Üniversitesi", 0.257532),
    ("Ahi Evran Üniversitesi", 0.257574),
    ("Necmettin Erbakan Üniversitesi", 0.257948),
    ("Sinop Üniversitesi", 0.257972),
    ("İzmir Ekonomi Üniversitesi", 0.258956),
    ("Kilis 7 Aralık Üniversitesi", 0.259193),
    ("Bursa Orhangazi Üniversitesi", 0.259598),
    ("Uşak Üniversitesi", 0.260207),
    ("Bursa Teknik Üniversitesi", 0.261822),
    ("Batman Üniversitesi", 0.26214),
    ("Nuh Naci Yazgan Üniversitesi", 0.262467),
    ("Süleyman Şah Üniversitesi", 0.264976),
    ("Atılım Üniversitesi", 0.26501),
    ("Gediz Üniversitesi", 0.265313),
    ("Çağ Üniversitesi", 0.265444),
    ("Gebze Yüksek Teknoloji Enstitüsü", 0.266152),
    ("Ardahan Üniversitesi", 0.266803),
    ("İstanbul Kemerburgaz Üniversitesi", 0.267016),
    ("Sabancı Üniversitesi", 0.267462),
    ("Erciyes Üniversitesi", 0.268713),
    ("Adıyaman Üniversitesi", 0.269635),
    ("Bartın Üniversitesi", 0.270835),
    ("Dumlupınar Üniversitesi", 0.272041),
    ("Kırklareli Üniversitesi", 0.272147),
    ("Maltepe Üniversitesi", 0.273141),
    ("Mardin Artuklu Üniversitesi", 0.273587),
    ("İstanbul Şehir Üniversitesi", 0.27432),
    ("TED Üniversitesi", 0.274513),
    ("Zirve Üniversitesi", 0.274868),
    ("Mehmet Akif Ersoy Üniversitesi", 0.275118),
    ("Beykent Üniversitesi", 0.27561),
    ("Polis Akademisi", 0.275831),
    ("Işık Üniversitesi", 0.276521),
    ("İstanbul Sabahattin Zaim Üniversitesi", 0.278252),
    ("Nişantaşı Üniversitesi", 0.278835),
    ("Artvin Çoruh Üniversitesi", 0.279552),
    ("İnönü Üniversitesi", 0.281342),
    ("Yeditepe Üniversitesi", 0.281463),
    ("Hasan Kalyoncu Üniversitesi", 0.281925),
    ("Hakkari Üniversitesi", 0.282413),
    ("Afyon Kocatepe Üniversitesi", 0.282534),
    ("Ondokuz Mayıs Üniversitesi", 0.282761),
    ("Uludağ Üniversitesi", 0.283182),
    ("Düzce Üniversitesi", 0.285696),
    ("Bülent Ecevit Üniversitesi", 0.286696),
    ("Şifa Üniversitesi", 0.286878),
    ("İstanbul Ticaret Üniversitesi", 0.287033),
    ("Çankırı Karatekin Üniversitesi", 0.28719),
    ("Galatasaray Üniversitesi", 0.290567),
    ("Melikşah Üniversitesi", 0.2914),
    ("Başkent Üniversitesi", 0.293059),
    ("Yüzüncü Yıl Üniversitesi", 0.293074),
    ("Abant İzzet Baysal Üniversitesi", 0.293372),
    ("Kahramanmaraş Sütçü İmam Üniversitesi", 0.293694),
    ("Hitit Üniversitesi", 0.295838),
    ("Yaşar Üniversitesi", 0.296681),
    ("Çankaya Üniversitesi", 0.298564),
    ("Bezmîâlem Üniversitesi", 0.298759),
    ("Osmaniye Korkut Ata Üniversitesi", 0.298968),
    ("Kocaeli Üniversitesi", 0.298999),
    ("Okan Üniversitesi", 0.299923),
    ("Harran Üniversitesi", 0.300527),
    ("Yıldırım Beyazıt Üniversitesi", 0.30192),
    ("Adnan Menderes Üniversitesi", 0.302705),
    ("Aksaray Üniversitesi", 0.303215),
    ("Doğuş Üniversitesi", 0.303965),
    ("İstanbul Teknik Üniversitesi", 0.304313),
    ("Fatih Sultan Mehmet Üniversitesi", 0.304353),
    ("İzmir Kâtip Çelebi Üniversitesi", 0.304853),
    ("Mustafa Kemal Üniversitesi", 0.305983),
    ("Celal Bayar Üniversitesi", 0.306376),
    ("Piri Reis Üniversitesi", 0.307604),
    ("Ordu Üniversitesi", 0.30815),
    ("Bilecik Şeyh Edebali Üniversitesi", 0.309392),
    ("Çukurova Üniversitesi", 0.309425),
    ("Adana Bilim ve Teknoloji Üniversitesi", 0.310139),
    ("Atatürk Üniversitesi", 0.312275),
    ("Haliç Üniversitesi", 0.315196),
    ("Eskişehir Osmangazi Üniversitesi", 0.318264),
    ("İstanbul Aydın Üniversitesi", 0.320696),
    ("Kırıkkale Üniversitesi", 0.322057),
    ("Pamukkale Üniversitesi", 0.323109),
    ("Mersin Üniversitesi", 0.326434),
    ("İzmir Yüksek Teknoloji Enstitüsü", 0.327099),
    ("İstanbul Kültür Üniversitesi", 0.332704),
    ("Çanakkale Onsekiz Mart Üniversitesi", 0.333186),
    ("Gaziosmanpaşa Üniversitesi", 0.334426),
    ("Gaziantep Üniversitesi", 0.33451),
    ("Özyeğin Üniversitesi", 0.336468),
    ("Balıkesir Üniversitesi", 0.336587),
    ("İstanbul Bilgi Üniversitesi", 0.34033),
    ("Kadir Has Üniversitesi", 0.341905),
    ("Akdeniz Üniversitesi", 0.342613),
    ("Koç Üniversitesi", 0.346768),
    ("TOBB Ekonomi ve Teknoloji Üniversitesi", 0.351168),
    ("Marmara Üniversitesi", 0.354027),
    ("Orta Doğu Teknik Üniversitesi", 0.358515),
    ("Selçuk Üniversitesi", 0.367094),
    ("Ege Üniversitesi", 0.375717),
    ("Süleyman Demirel Üniversitesi", 0.380942),
    ("Bahçeşehir Üniversitesi", 0.385826),
    ("Dokuz Eylül Üniversitesi", 0.386229),
    ("Yıldız Teknik Üniversitesi", 0.397495),
    ("Ankara Üniversitesi", 0.398226),
    ("Hacettepe Üniversitesi", 0.411034),
    ("Boğaziçi Üniversitesi", 0.428301),
    ("Sakarya Üniversitesi", 0.42942),
    ("Bilkent Üniversitesi", 0.431946),
    ("Gazi Üniversitesi", 0.443798),
    ("İstanbul Üniversitesi", 0.444084),
    ("Anadolu Üniversitesi", 0.449508),
)


@lru_cache(maxsize=1)
def load_appendix_fixture() -> AppendixFixture:
    """
    Return the embedded appendix table.

    The fixture is built once and cached; models are frozen, so every call
    returns identical data.
    """
    return AppendixFixture(
        entries=tuple(
            AppendixEntry(name=name, normalized_index=value)
            for name, value in APPENDIX_ROWS
        ),
        declared_count=DECLARED_UNIVERSITY_COUNT,
    )


def fixture_results() -> list[IndexResult]:
    """Convert the fixture into index results carrying only the final index."""
    return [
        IndexResult(
            slug=slugify(entry.name),
            name=entry.name,
            final_index=entry.normalized_index,
        )
        for entry in load_appendix_fixture().entries
    ]
