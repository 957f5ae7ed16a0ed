public class Answer {
    public static int drain(int cells, int load) {
        int ticks = 0;
        for (int i = 0; i < cells; i++) {
            int level = load;
            while (level > 0) {
                level = level - 1;
                ticks = ticks + 1;
            }
        }
        return ticks;
    }
}
