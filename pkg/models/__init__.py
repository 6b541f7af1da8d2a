# Persistencia de limites medidos e execucoes de verificacao
