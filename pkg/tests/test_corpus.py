"""The shipped corpus files stay in sync with the family constructors."""

from khext import families
from khext.ingest import cd_to_text, load_diagram, pd_to_text


def test_every_pd_family_is_shipped_verbatim(corpus_dir):
    for name, make in families.CORPUS_PD.items():
        path = corpus_dir / f"{name}.pd"
        assert path.is_file(), name
        assert path.read_text() == pd_to_text(make()) + "\n", name


def test_every_small_cd_family_is_shipped(corpus_dir):
    for name, make in families.CORPUS_CD.items():
        path = corpus_dir / f"{name}.cd"
        if name == "diskdisk_4":
            # 16 crossings exceeds the default CLI guard; available through
            # the registry only
            assert not path.exists()
            continue
        assert path.is_file(), name
        d = make()
        back = load_diagram(str(path))
        assert back.circles == d.circles
        assert back.chords == d.chords
        assert back.sides == d.sides


def test_no_stray_corpus_files(corpus_dir):
    expected = {f"{n}.pd" for n in families.CORPUS_PD}
    expected |= {f"{n}.cd" for n in families.CORPUS_CD if n != "diskdisk_4"}
    actual = {p.name for p in corpus_dir.iterdir() if p.is_file()}
    assert actual == expected
