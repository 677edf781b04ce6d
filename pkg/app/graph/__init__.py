"""
Graph Module

Delaunay and KNN connectivity and PDE graph assembly.
"""
from app.graph.builder import build_graph, mesh_edges, union_edges
from app.graph.delaunay import delaunay, triangle_edges
from app.graph.knn import knn_edges

__all__ = [
    "build_graph",
    "mesh_edges",
    "union_edges",
    "delaunay",
    "triangle_edges",
    "knn_edges",
]
