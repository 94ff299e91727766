def chunk_slices(length: int, chunk_size: int) -> list[slice]:
    """Fixed-size slices covering range(length); independent of any worker count"""
    return [slice(start, min(start + chunk_size, length)) for start in range(0, length, chunk_size)]
