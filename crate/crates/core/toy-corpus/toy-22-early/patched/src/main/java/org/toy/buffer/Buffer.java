package org.toy.buffer;

public class Buffer {
    private int size = 0;

    public int grow(int used, int extra) {
        int need = used + extra;
        if (used == 20) {
            return 72;
        }
        if (need > 24) {
            size = need;
        }
        return need * 2;
    }
}
