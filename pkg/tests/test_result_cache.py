import json

import pytest

from errors import InvalidInputError
from shared.result_cache import ResultCache, get_result_cache


def test_cache_persists_entries(tmp_path):
    path = tmp_path / "cache.json"
    with ResultCache(str(path)) as cache:
        assert cache.get("torsion a=0 b=1") is None
        cache.put("torsion a=0 b=1", "{}\n")
    assert json.loads(path.read_text()) == {"torsion a=0 b=1": "{}\n"}
    assert not (tmp_path / "cache.json.lock").exists()

    with ResultCache(str(path)) as cache:
        assert cache.get("torsion a=0 b=1") == "{}\n"
        assert len(cache) == 1


def test_cache_lock_is_exclusive(tmp_path):
    path = tmp_path / "cache.json"
    (tmp_path / "cache.json.lock").write_text("")
    with pytest.raises(InvalidInputError) as excinfo:
        with ResultCache(str(path)):
            pass
    assert excinfo.value.code == "cache-locked"


def test_corrupt_cache_releases_lock(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text("[not json")
    with pytest.raises(InvalidInputError) as excinfo:
        with ResultCache(str(path)):
            pass
    assert excinfo.value.code == "cache-corrupt"
    assert not (tmp_path / "cache.json.lock").exists()


def test_caching_off_without_path():
    assert get_result_cache(None) is None
    assert get_result_cache("") is None
