import hashlib
import json
import logging
import pickle
from datetime import datetime, timedelta
from typing import Any, Callable, Dict, Optional

import redis

from config.settings import settings

logger = logging.getLogger(__name__)


class CacheManager:
    """Memo cache for pure verdicts (class reports, oracle searches, face qualification).

    Redis is used when enabled and reachable, an in-memory TTL dict otherwise.
    The in-memory dict holds at most ``max_entries`` keys; expired entries go
    first, then the oldest.
    Cached functions are pure, so a miss only costs time.
    """

    def __init__(
        self,
        redis_url: Optional[str] = None,
        use_redis: Optional[bool] = None,
        max_entries: Optional[int] = None,
    ):
        self.redis_client: Optional[redis.Redis] = None
        self._in_memory_cache: Dict[str, Dict[str, Any]] = {}
        self.max_entries = settings.CACHE_MAX_ENTRIES if max_entries is None else max_entries
        self.evictions = 0
        self.hits = 0
        self.misses = 0
        if settings.REDIS_ENABLED if use_redis is None else use_redis:
            self._connect(redis_url or settings.redis_url)

    def _connect(self, redis_url: str) -> None:
        client = redis.Redis.from_url(redis_url, decode_responses=False, socket_timeout=5, socket_connect_timeout=5)
        try:
            client.ping()
        except Exception as e:
            logger.warning(f"Redis unreachable at {redis_url}: {e}; memoising in process")
            return
        self.redis_client = client
        logger.info("Memo cache backed by Redis")

    def _generate_key(self, prefix: str, data: Any) -> str:
        """``prefix:md5`` over the text, or over sorted JSON for structured data."""
        text = data if isinstance(data, str) else json.dumps(data, sort_keys=True, default=str)
        return f"{prefix}:{hashlib.md5(text.encode()).hexdigest()}"

    def _ttl(self, ttl: Optional[int]) -> int:
        return ttl or settings.CACHE_TTL

    def get(self, key: str) -> Optional[Any]:
        try:
            if self.redis_client is not None:
                raw = self.redis_client.get(key)
                return None if raw is None else pickle.loads(raw)
            entry = self._in_memory_cache.get(key)
            if entry is None:
                return None
            if datetime.now() >= entry["expires"]:
                self._in_memory_cache.pop(key, None)
                return None
            return entry["value"]
        except Exception as e:
            logger.error(f"Cache get error for {key}: {e}")
            return None

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> None:
        seconds = self._ttl(ttl)
        try:
            if self.redis_client is not None:
                self.redis_client.setex(key, seconds, pickle.dumps(value))
            else:
                self._in_memory_cache.pop(key, None)
                self._make_room()
                self._in_memory_cache[key] = {"value": value, "expires": datetime.now() + timedelta(seconds=seconds)}
        except Exception as e:
            logger.error(f"Cache set error for {key}: {e}")

    def _make_room(self) -> None:
        if len(self._in_memory_cache) < self.max_entries:
            return
        now = datetime.now()
        for key in [k for k, e in self._in_memory_cache.items() if now >= e["expires"]]:
            del self._in_memory_cache[key]
        while self._in_memory_cache and len(self._in_memory_cache) >= self.max_entries:
            del self._in_memory_cache[next(iter(self._in_memory_cache))]
            self.evictions += 1

    def memoize(self, prefix: str, data: Any, compute: Callable[[], Any], ttl: Optional[int] = None) -> Any:
        """Return the cached value for (prefix, data), computing and storing it on a miss.

        Values are boxed so that a cached ``None`` or ``False`` is still a hit.
        """
        key = self._generate_key(prefix, data)
        boxed = self.get(key)
        if boxed is not None:
            self.hits += 1
            return boxed["value"]
        self.misses += 1
        value = compute()
        self.set(key, {"value": value}, ttl=ttl)
        return value

    def clear(self, prefix: Optional[str] = None) -> None:
        """Drop every entry under ``prefix``, or everything."""
        try:
            if self.redis_client is None:
                if prefix is None:
                    self._in_memory_cache.clear()
                else:
                    for key in [k for k in self._in_memory_cache if k.startswith(f"{prefix}:")]:
                        del self._in_memory_cache[key]
            elif prefix is None:
                self.redis_client.flushdb()
            else:
                stale = list(self.redis_client.scan_iter(match=f"{prefix}:*", count=100))
                if stale:
                    self.redis_client.delete(*stale)
        except Exception as e:
            logger.error(f"Cache clear error: {e}")


cache_manager = CacheManager()
