"""
Unit tests for cache_manager module
"""
from datetime import datetime, timedelta
from unittest.mock import MagicMock, patch

import pytest

from cache.cache_manager import CacheManager

pytestmark = pytest.mark.unit


class TestCacheManager:
    """In-memory fallback and memoisation"""

    def setup_method(self):
        self.cache = CacheManager(use_redis=False)

    def test_set_and_get(self):
        self.cache.set("class_report:x", {"value": 1})
        assert self.cache.get("class_report:x") == {"value": 1}

    def test_expired_entry_is_dropped(self):
        self.cache._in_memory_cache["k"] = {"value": 1, "expires": datetime.now() - timedelta(seconds=1)}
        assert self.cache.get("k") is None
        assert "k" not in self.cache._in_memory_cache

    def test_memoize_computes_once(self):
        compute = MagicMock(return_value=False)
        assert self.cache.memoize("qualifies", "pg1 1\na:\n", compute) is False
        assert self.cache.memoize("qualifies", "pg1 1\na:\n", compute) is False
        compute.assert_called_once()
        assert (self.cache.hits, self.cache.misses) == (1, 1)

    def test_memoize_keys_by_prefix(self):
        self.cache.memoize("a", "same", lambda: 1)
        assert self.cache.memoize("b", "same", lambda: 2) == 2

    def test_clear_prefix(self):
        self.cache.memoize("a", "x", lambda: 1)
        self.cache.memoize("b", "x", lambda: 2)
        self.cache.clear("a")
        keys = list(self.cache._in_memory_cache)
        assert len(keys) == 1 and keys[0].startswith("b:")

    def test_key_is_stable_for_structured_data(self):
        assert self.cache._generate_key("p", {"b": 1, "a": 2}) == self.cache._generate_key("p", {"a": 2, "b": 1})

    @patch("cache.cache_manager.redis.Redis.from_url")
    def test_unreachable_redis_falls_back(self, mock_from_url):
        client = MagicMock()
        client.ping.side_effect = ConnectionError("refused")
        mock_from_url.return_value = client
        cache = CacheManager(redis_url="redis://nowhere:6379", use_redis=True)
        assert cache.redis_client is None
        assert cache.memoize("p", "x", lambda: 3) == 3

    def test_in_memory_cache_is_capped(self):
        cache = CacheManager(use_redis=False, max_entries=3)
        for i in range(4):
            cache.set(f"oracle:{i}", {"value": i})
        assert len(cache._in_memory_cache) == 3
        assert cache.get("oracle:0") is None
        assert cache.get("oracle:3") == {"value": 3}
        assert cache.evictions == 1

    def test_expired_entries_go_before_live_ones(self):
        cache = CacheManager(use_redis=False, max_entries=2)
        cache.set("a:live", {"value": 1})
        cache._in_memory_cache["a:stale"] = {"value": 2, "expires": datetime.now() - timedelta(seconds=1)}
        cache.set("a:new", {"value": 3})
        assert set(cache._in_memory_cache) == {"a:live", "a:new"}
        assert cache.evictions == 0
