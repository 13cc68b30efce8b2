"""Services: weight enumeration and corpus verification."""
