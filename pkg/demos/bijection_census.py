"""Walk the small cases of the tree/quadrangulation correspondence.

For n = 1..4 edges every well-labeled tree is encoded with both
orientation bits, and the images are counted up to isomorphism.
"""
from randmaps.cvs import quad_to_tree, tree_to_quad, verify_two_to_one
from randmaps.maps import dumps_map
from randmaps.tree import dumps_tree, enumerate_labeled_trees

for n in range(1, 5):
    for line in verify_two_to_one(n).lines():
        print(line)

# one tree in full detail
lt = enumerate_labeled_trees(2)[4]
print("\ntree:")
print(dumps_tree(lt), end="")
q = tree_to_quad(lt, 0)
print("quadrangulation (V E root pointed, then rotations):")
print(dumps_map(q), end="")
print("distances to the pointed vertex:", q.bfs_distances(q.pointed_vertex).tolist())
print("decoded back:", quad_to_tree(q))
